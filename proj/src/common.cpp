#include "levypot/common.hpp"

#include <omp.h>

namespace levypot {

namespace {
int default_threads() {
    static const int n = omp_get_max_threads();
    return n;
}
}  // namespace

int set_thread_count(int n) {
    const int effective = n > 0 ? n : default_threads();
    omp_set_num_threads(effective);
    return effective;
}

int thread_count() { return omp_get_max_threads(); }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace levypot
