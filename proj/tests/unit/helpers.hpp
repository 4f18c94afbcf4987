#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

namespace testing {

inline std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

// Unit-scale Pareto: P(X > x) = x^-alpha for x >= 1.
inline std::vector<double> pareto_sample(std::size_t n, double alpha, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = std::pow(1.0 - u(rng), -1.0 / alpha);
    return x;
}

inline std::vector<double> t_sample(std::size_t n, double nu, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::student_t_distribution<double> d(nu);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

class TempFile {
public:
    explicit TempFile(const std::string& contents, const std::string& suffix = ".csv") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("condevt_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + suffix);
        std::ofstream(path_) << contents;
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testing
