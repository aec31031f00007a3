#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "heftcom/market.hpp"
#include "heftcom/quantiles.hpp"
#include "heftcom/series.hpp"
#include "heftcom/time.hpp"

namespace heftcom::testing {

inline Period at(const char* iso) {
    return parse_utc_timestamp(iso);
}

inline Date day(const char* iso) {
    return parse_date(iso);
}

/// Removes itself on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("heftcom-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Forecast with every level equal to `v`.
inline QuantileValues flat(double v) {
    QuantileValues q;
    q.fill(v);
    return q;
}

inline QuantileValues ramp(double first, double step) {
    QuantileValues q;
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = first + step * static_cast<double>(i);
    }
    return q;
}

}  // namespace heftcom::testing
