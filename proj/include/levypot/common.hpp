#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace levypot {

using Complex = std::complex<double>;
using Point = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input. `field()` names the offending parameter so front ends can
// report it in machine-readable form.
class InvalidArgument : public Error {
public:
    InvalidArgument(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)), message_(what) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    std::string field_;
    std::string message_;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

// Selects between the OpenMP kernels and their serial references. Both
// produce bitwise-identical results: parallel loops write into indexed
// slots and every reduction runs in a fixed order afterwards.
enum class Exec { Serial, Parallel };

// Caps OpenMP workers; n <= 0 restores the runtime default. Returns the
// effective count.
int set_thread_count(int n);
int thread_count();

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm(std::span<const double> a);

// Pairwise (tree) summation; deterministic for a fixed input order.
[[nodiscard]] double pairwise_sum(std::span<const double> v);

// Runs body(i) for i in [0, n). Parallel mode distributes indices over
// OpenMP threads; the first exception thrown is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(levypot_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

inline void require(bool cond, const char* field, const std::string& what) {
    if (!cond) throw InvalidArgument(field, what);
}

}  // namespace levypot
