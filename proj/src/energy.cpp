#include "levypot/energy.hpp"

#include <algorithm>
#include <map>

namespace levypot {

namespace {

constexpr int kPanelOrder = 16;

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// Mean of exp(i r omega.x) over unit directions omega, as a function of u = r|x|.
double angular_mean(int d, double u) {
    if (u == 0.0) return 1.0;
    if (d == 1) return std::cos(u);
    if (d == 2) return std::cyl_bessel_j(0.0, u);
    if (d == 3) return std::sin(u) / u;
    const double nu = 0.5 * d - 1.0;
    return std::tgamma(0.5 * d) * std::pow(2.0 / u, nu) * std::cyl_bessel_j(nu, u);
}

// Width of the bounding box of the atoms.
double extent(const AtomicMeasure& mu) {
    double s = 0.0;
    for (int a = 0; a < mu.dim(); ++a) {
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            lo = std::min(lo, mu.point(i)[a]);
            hi = std::max(hi, mu.point(i)[a]);
        }
        s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
}

double max_cell(const AtomicMeasure& mu) {
    if (!mu.cell()) return 0.0;
    return *std::max_element(mu.cell()->begin(), mu.cell()->end());
}

// Distinct pair distances with their weight: sum_ij w_i w_j g(|x_i - x_j|)
// equals sum_p weight_p g(dist_p). `drop_diagonal` removes i == j.
std::vector<std::pair<double, double>> pair_distances(const AtomicMeasure& mu, bool drop_diagonal) {
    std::map<double, double> acc;
    double diag = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        diag += mu.weight(i) * mu.weight(i);
        for (std::size_t j = i + 1; j < mu.size(); ++j) {
            double s = 0.0;
            for (int a = 0; a < mu.dim(); ++a) {
                const double dx = mu.point(i)[a] - mu.point(j)[a];
                s += dx * dx;
            }
            acc[std::sqrt(s)] += 2.0 * mu.weight(i) * mu.weight(j);
        }
    }
    if (!drop_diagonal) acc[0.0] += diag;
    return {acc.begin(), acc.end()};
}

EnergyReport finish(double body, const std::vector<double>& panels, const QuadratureSpec& quad) {
    EnergyReport rep;
    const std::size_t k = panels.size();
    auto tail_at = [&](std::size_t i) -> double {
        const double prev = panels[i - 1], last = panels[i];
        if (last == 0.0) return 0.0;
        if (prev == 0.0 || (prev > 0.0) != (last > 0.0)) return kInf;
        const double q = last / prev;
        return q >= 1.0 ? kInf : last * q / (1.0 - q);
    };
    const double tail = tail_at(k - 1);
    const double tail_prev = tail_at(k - 2);
    const double last = std::abs(panels[k - 1]), prev = std::abs(panels[k - 2]);
    if (!std::isfinite(tail) && last < prev) {
        // sign-changing panels with shrinking size: keep the body, bound the rest
        const double q = last / prev;
        rep.value = body;
        rep.tail_estimate = last * q / (1.0 - q);
        rep.converged = rep.tail_estimate <= quad.rel_tol * std::abs(body);
        return rep;
    }
    if (!std::isfinite(tail)) {
        rep.tail_estimate = kInf;
        rep.converged = false;
        rep.value = quad.tail_policy == TailPolicy::Truncate ? body : kInf;
        return rep;
    }
    const double err = std::isfinite(tail_prev) ? std::abs(body + tail - (body - panels[k - 1] + tail_prev)) : std::abs(tail);
    if (quad.tail_policy == TailPolicy::Truncate) {
        rep.value = body;
        rep.tail_estimate = std::abs(tail);
    } else {
        rep.value = body + tail;
        rep.tail_estimate = err;
    }
    rep.converged = rep.tail_estimate <= quad.rel_tol * std::abs(rep.value);
    return rep;
}

// int_0^inf g: head [0, a0] by the power substitution, then dyadic panels up
// to r_max, each split into sub-panels no longer than half an oscillation.
EnergyReport radial_integral(const Fn1& g, double origin_exponent, double bandwidth, const QuadratureSpec& quad,
                             Exec exec) {
    const double a0 = bandwidth > kPi ? kPi / bandwidth : 1.0;
    const auto head = integrate_power_origin(g, a0, origin_exponent, quad.rel_tol * 0.01);

    struct Sub {
        double lo, hi;
        std::size_t panel;
    };
    std::vector<Sub> subs;
    std::size_t n_panels = 0;
    for (double lo = a0; n_panels < 4 || lo < quad.r_max * (1.0 - 1e-12); lo *= 2.0, ++n_panels) {
        const double len = lo;
        const int m = std::max(2, static_cast<int>(std::ceil(len * bandwidth / kPi)) + 1);
        for (int s = 0; s < m; ++s) subs.push_back({lo + len * s / m, lo + len * (s + 1) / m, n_panels});
    }
    const GaussRule& rule = gauss_legendre(kPanelOrder);
    std::vector<double> slot(subs.size());
    for_each_index(subs.size(), exec, [&](std::size_t i) {
        const double mid = 0.5 * (subs[i].lo + subs[i].hi), half = 0.5 * (subs[i].hi - subs[i].lo);
        double s = 0.0;
        for (int q = 0; q < kPanelOrder; ++q) s += rule.weights[q] * g(mid + half * rule.nodes[q]);
        slot[i] = half * s;
    });
    std::vector<double> panels(n_panels, 0.0);
    std::size_t start = 0;
    for (std::size_t p = 0; p < n_panels; ++p) {
        std::size_t end = start;
        while (end < subs.size() && subs[end].panel == p) ++end;
        panels[p] = pairwise_sum(std::span<const double>(slot).subspan(start, end - start));
        start = end;
    }
    const double body = head.value + pairwise_sum(panels);
    return finish(body, panels, quad);
}

// (2 pi)^-d int over R^d by tensor Gauss-Legendre on nested boxes of half
// widths R/4, R/2, R; the tail beyond R is extrapolated from the two shells.
EnergyReport tensor_integral(const FnD& f, int d, double bandwidth, const QuadratureSpec& quad, Exec exec) {
    const double R = quad.r_max;
    constexpr int order = 8;
    const GaussRule& rule = gauss_legendre(order);
    auto box = [&](double half) {
        const int per_axis =
            std::max(quad.n_nodes / order, static_cast<int>(std::ceil(2.0 * half * std::max(bandwidth, 1.0) / kPi)));
        const std::size_t pts_axis = static_cast<std::size_t>(per_axis) * order;
        std::vector<double> x(pts_axis), w(pts_axis);
        const double h = 2.0 * half / per_axis;
        for (int p = 0; p < per_axis; ++p)
            for (int q = 0; q < order; ++q) {
                x[p * order + q] = -half + (p + 0.5) * h + 0.5 * h * rule.nodes[q];
                w[p * order + q] = 0.5 * h * rule.weights[q];
            }
        std::size_t rows = 1;
        for (int a = 1; a < d; ++a) rows *= pts_axis;
        std::vector<double> slot(rows);
        for_each_index(rows, exec, [&](std::size_t r) {
            Point xi(d);
            std::vector<std::size_t> idx(d, 0);
            std::size_t rem = r;
            for (int a = 1; a < d; ++a) {
                idx[a] = rem % pts_axis;
                rem /= pts_axis;
            }
            double wr = 1.0;
            for (int a = 1; a < d; ++a) {
                xi[a] = x[idx[a]];
                wr *= w[idx[a]];
            }
            std::vector<double> line(pts_axis);
            for (std::size_t i = 0; i < pts_axis; ++i) {
                xi[0] = x[i];
                line[i] = w[i] * f(xi);
            }
            slot[r] = wr * pairwise_sum(line);
        });
        return pairwise_sum(slot);
    };
    const double i1 = box(0.25 * R), i2 = box(0.5 * R), i3 = box(R);
    const double norm_c = std::pow(2.0 * kPi, -d);
    std::vector<double> panels{i1, i2 - i1, i3 - i2};
    auto rep = finish(i3, panels, quad);
    if (std::isfinite(rep.value)) rep.value *= norm_c;
    rep.tail_estimate *= norm_c;
    return rep;
}

double fourier_sq(const AtomicMeasure& mu, std::span<const double> xi, Smoothing smoothing) {
    return std::norm(smoothing == Smoothing::Cell ? fourier_measure_smoothed(mu, xi) : fourier_measure(mu, xi));
}

}  // namespace

double mutual_energy_real(const Kernel& k, const AtomicMeasure& mu, const AtomicMeasure& nu, DiagonalMode mode,
                          Exec exec) {
    require(mu.dim() == k.dim && nu.dim() == k.dim, "measures", "dimension mismatch with kernel");
    double diag_value = 0.0;
    if (mode == DiagonalMode::CellAverage) {
        require(mu.cell().has_value(), "cell", "cell-average diagonal needs a measure with a recorded cell");
        diag_value = cell_average(k, *mu.cell());
    }
    std::vector<double> rows(mu.size());
    for_each_index(mu.size(), exec, [&](std::size_t i) {
        std::vector<double> terms(nu.size(), 0.0);
        Point diff(k.dim), back(k.dim);
        for (std::size_t j = 0; j < nu.size(); ++j) {
            const double w = mu.weight(i) * nu.weight(j);
            if (w == 0.0) continue;
            bool same = true;
            for (int a = 0; a < k.dim; ++a) {
                diff[a] = mu.point(i)[a] - nu.point(j)[a];
                back[a] = -diff[a];
                same = same && diff[a] == 0.0;
            }
            if (same && mode == DiagonalMode::Drop) continue;
            const double kv = same && mode == DiagonalMode::CellAverage
                                  ? diag_value
                                  : (k.radial ? k.eval(diff) : 0.5 * (k.eval(diff) + k.eval(back)));
            terms[j] = w * kv;
        }
        rows[i] = pairwise_sum(terms);
    });
    return pairwise_sum(rows);
}

EnergyReport spectral_radial(const Fn1& profile, int dim, double origin_exponent, double bandwidth,
                             const QuadratureSpec& quad, Exec exec) {
    quad.validate();
    require(dim >= 1, "dim", "must be positive");
    const double p = origin_exponent + dim - 1.0;
    require(p > -1.0, "origin_exponent", "integrand not integrable at the origin");
    auto g = [&](double r) { return dim == 1 ? profile(r) : std::pow(r, dim - 1) * profile(r); };
    auto rep = radial_integral(g, p, bandwidth, quad, exec);
    const double c = dim == 1 ? 1.0 / kPi : sphere_area(dim) * std::pow(2.0 * kPi, -dim);
    if (std::isfinite(rep.value)) rep.value *= c;
    rep.tail_estimate *= c;
    return rep;
}

EnergyReport energy_fourier(const ExponentVector& psi, const AtomicMeasure& mu, const QuadratureSpec& quad,
                            Smoothing smoothing, Exec exec) {
    quad.validate();
    const int d = psi.dim();
    require(mu.dim() == d, "measure", "dimension mismatch with exponents");
    const bool smoothed = smoothing == Smoothing::Cell && mu.cell().has_value();
    if (!smoothed) {
        const auto decay = psi.kernel_decay();
        if (decay && *decay <= d) return {kInf, kInf, false};
    }
    const Smoothing sm = smoothed ? Smoothing::Cell : Smoothing::Atomic;
    const double bw = extent(mu) + 0.5 * max_cell(mu);

    if (d == 1 && quad.scheme != QuadScheme::Tensor) {
        auto profile = [&](double r) {
            const Point xi{r};
            return k_psi(psi, xi) * fourier_sq(mu, xi, sm);
        };
        return spectral_radial(profile, 1, 0.0, bw, quad, exec);
    }
    if (psi.is_isotropic() && !smoothed && quad.scheme != QuadScheme::Tensor) {
        const auto pairs = pair_distances(mu, false);
        auto profile = [&](double r) {
            double s = 0.0;
            for (const auto& [dist, w] : pairs) s += w * angular_mean(d, r * dist);
            return k_psi_radial(psi, r) * s;
        };
        return spectral_radial(profile, d, 0.0, bw, quad, exec);
    }
    auto f = [&](std::span<const double> xi) { return k_psi(psi, xi) * fourier_sq(mu, xi, sm); };
    return tensor_integral(f, d, bw, quad, exec);
}

EnergyReport energy_fourier_fn(const ExponentVector& psi, const SpectrumFn& fhat, const QuadratureSpec& quad,
                               double bandwidth, Exec exec) {
    quad.validate();
    const int d = psi.dim();
    if (d == 1 && quad.scheme != QuadScheme::Tensor) {
        auto profile = [&](double r) {
            const Point a{r}, b{-r};
            return 0.5 * (k_psi(psi, a) * std::norm(fhat(a)) + k_psi(psi, b) * std::norm(fhat(b)));
        };
        return spectral_radial(profile, 1, 0.0, bandwidth, quad, exec);
    }
    auto f = [&](std::span<const double> xi) { return k_psi(psi, xi) * std::norm(fhat(xi)); };
    return tensor_integral(f, d, bandwidth, quad, exec);
}

IdentityCheck energy_identity_check(const Kernel& k, const AtomicMeasure& nu, const AtomicMeasure& mu,
                                    const QuadratureSpec& quad, Exec exec) {
    require(k.has_fourier(), "kernel", "identity check needs a known transform");
    require(nu.dim() == k.dim && mu.dim() == k.dim, "measures", "dimension mismatch with kernel");
    const int d = k.dim;

    // kappa * nu as a gauge
    Kernel conv;
    conv.dim = d;
    conv.name = k.name + "*nu";
    conv.eval = [&k, &nu, d](std::span<const double> x) {
        std::vector<double> terms(nu.size());
        Point y(d);
        for (std::size_t j = 0; j < nu.size(); ++j) {
            for (int a = 0; a < d; ++a) y[a] = x[a] - nu.point(j)[a];
            terms[j] = nu.weight(j) * k.eval(y);
        }
        return pairwise_sum(terms);
    };
    IdentityCheck out;
    out.real_side = mutual_energy_real(conv, mu, mu, DiagonalMode::Exact, exec);

    double shift = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) shift = std::max(shift, norm(nu.point(j)));
    const double bw = extent(mu) + shift;
    auto integrand = [&](std::span<const double> xi) {
        return k.fourier(xi) * fourier_measure(nu, xi).real() * std::norm(fourier_measure(mu, xi));
    };
    EnergyReport rep;
    if (d == 1 && quad.scheme != QuadScheme::Tensor) {
        auto profile = [&](double r) {
            const Point a{r}, b{-r};
            return 0.5 * (integrand(a) + integrand(b));
        };
        rep = spectral_radial(profile, 1, k.fourier_origin_exponent, bw, quad, exec);
    } else {
        rep = tensor_integral(integrand, d, bw, quad, exec);
    }
    out.fourier_side = rep.value;
    out.converged = rep.converged && std::isfinite(out.real_side);
    out.rel_gap = std::abs(out.real_side - out.fourier_side) / std::max(std::abs(out.real_side), 1e-300);
    return out;
}

IdentityCheck riesz_identity_check(double s, const AtomicMeasure& mu, const QuadratureSpec& quad, DiagonalMode mode,
                                   Exec exec) {
    const int d = mu.dim();
    const double alpha = d - s;
    const Kernel k = riesz_kernel(d, alpha);
    const double c = k.fourier(Point(d, 1.0 / std::sqrt(static_cast<double>(d))));
    IdentityCheck out;
    out.real_side = mutual_energy_real(k, mu, mu, mode, exec);

    if (mode != DiagonalMode::Drop) {
        require(d == 1 && mu.cell().has_value(), "measure",
                "continuum Riesz check needs a one-dimensional measure with a recorded cell");
        auto profile = [&](double r) {
            const Point xi{r};
            return c * std::pow(r, -alpha) * fourier_sq(mu, xi, Smoothing::Cell);
        };
        const auto rep = spectral_radial(profile, 1, -alpha, extent(mu) + 0.5 * max_cell(mu), quad, exec);
        out.fourier_side = rep.value;
        out.converged = rep.converged;
    } else {
        // Off-diagonal pairs only: each distance D contributes a conditionally
        // convergent radial integral c (2 pi)^-d |S| int r^(d-1-alpha) A_d(rD) dr.
        require(d == 1 || d == 3, "dim", "pairwise Riesz check supports d = 1 and d = 3");
        const auto pairs = pair_distances(mu, true);
        std::vector<double> terms(pairs.size());
        std::vector<char> ok(pairs.size(), 1);
        for_each_index(pairs.size(), exec, [&](std::size_t p) {
            const auto [dist, w] = pairs[p];
            IntegralResult r;
            if (d == 1) {
                r = integrate_oscillatory([&](double x) { return std::pow(x, -alpha); }, dist, Trig::Cos,
                                          quad.rel_tol, 1.0 / dist);
                r.value /= kPi;
            } else {
                require(alpha > 1.0, "alpha", "pairwise check in d = 3 needs alpha > 1");
                r = integrate_oscillatory([&](double x) { return std::pow(x, 1.0 - alpha) / dist; }, dist, Trig::Sin,
                                          quad.rel_tol, 1.0 / dist);
                r.value *= sphere_area(3) * std::pow(2.0 * kPi, -3.0);
            }
            ok[p] = r.converged;
            terms[p] = w * c * r.value;
        });
        out.fourier_side = pairwise_sum(terms);
        out.converged = std::all_of(ok.begin(), ok.end(), [](char f) { return f != 0; });
    }
    out.rel_gap = std::abs(out.real_side - out.fourier_side) / std::max(std::abs(out.real_side), 1e-300);
    return out;
}

EnergyReport sojourn_second_moment(const ExponentVector& psi, const SpectrumFn& fhat, const QuadratureSpec& quad,
                                   double bandwidth, Exec exec) {
    const int d = psi.dim();
    const double scale = std::pow(4.0, -static_cast<double>(psi.size()));
    auto weight = [&](std::span<const double> xi) {
        double prod = scale;
        for (const auto& c : psi.components()) prod *= lambda_closed(c(xi));
        return prod * std::norm(fhat(xi));
    };
    if (d == 1 && quad.scheme != QuadScheme::Tensor) {
        auto profile = [&](double r) {
            const Point a{r}, b{-r};
            return 0.5 * (weight(a) + weight(b));
        };
        return spectral_radial(profile, 1, 0.0, bandwidth, quad, exec);
    }
    return tensor_integral(weight, d, bandwidth, quad, exec);
}

SojournBounds sojourn_bounds(const ExponentVector& psi, const SpectrumFn& fhat, const QuadratureSpec& quad,
                             const std::vector<Point>& sector_grid, double bandwidth) {
    SojournBounds b;
    const auto energy = energy_fourier_fn(psi, fhat, quad, bandwidth);
    b.upper = energy.value;
    for (const auto& c : psi.components()) b.sector_constant = std::max(b.sector_constant, sector_constant(c, sector_grid));
    const double c2 = b.sector_constant * b.sector_constant;
    const double n = static_cast<double>(psi.size());
    b.lower = c2 < 2.0 ? std::pow(0.5 * (2.0 - c2), n) * b.upper : 0.0;
    b.lower_corrected = c2 < 2.0 ? std::pow(0.5 * std::min(1.0, 2.0 - c2), n) * b.upper : 0.0;
    return b;
}

}  // namespace levypot
