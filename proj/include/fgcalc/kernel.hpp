#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fgcalc/errors.hpp"
#include "fgcalc/qcore.hpp"
#include "fgcalc/scalar.hpp"

namespace fgcalc {

enum class PairKind { OneDiff, DiffDiff, OnexyDiff, Bibasic, Theta, Broken };

// Precision-independent description of a pair, e.g. {"bibasic", {a, b}}.
struct PairSpec {
    std::string name;
    std::map<std::string, Complex> params;
};

std::vector<std::string> pair_names();        // the five kernel pairs
std::vector<std::string> all_pair_names();    // plus the "broken" negative control
PairKind pair_kind(const std::string& name);  // throws Usage on unknown names
PairSpec parse_pair_spec(const std::string& text);
std::string format_pair_spec(const PairSpec& spec);

template <class C>
class FGPair {
public:
    std::string name;
    PairKind kind;
    std::map<std::string, C> params;

    FGPair(std::string name_, PairKind kind_, std::map<std::string, C> params_)
        : name(std::move(name_)), kind(kind_), params(std::move(params_)) {
        if (kind == PairKind::Bibasic) {
            a_ = require("a");
            b_ = require("b");
            if (is_exact_zero(a_)) fail(ErrorKind::Domain, "bibasic pair needs a != 0");
        }
        if (kind == PairKind::Theta) base_.emplace(require("q"));
    }

    C f(const C& x, const C& y) const {
        C one(1.0, 0.0);
        switch (kind) {
            case PairKind::OneDiff: return one;
            case PairKind::DiffDiff: return x - y;
            case PairKind::OnexyDiff: return one - x * y;
            case PairKind::Bibasic:
                if (is_exact_zero(y)) fail(ErrorKind::Domain, "bibasic f has a pole at y = 0");
                return (one - a_ * x * y) * (one - b_ * x / y);
            case PairKind::Theta: return theta_product(x, y);
            case PairKind::Broken: return one + x * y * y;
        }
        return one;
    }

    C g(const C& x, const C& y) const {
        C one(1.0, 0.0);
        switch (kind) {
            case PairKind::OneDiff:
            case PairKind::DiffDiff:
            case PairKind::OnexyDiff:
            case PairKind::Broken: return x - y;
            case PairKind::Bibasic:
                if (is_exact_zero(x * y)) fail(ErrorKind::Domain, "bibasic g has a pole at xy = 0");
                return (x - y) * (one - b_ / (a_ * x * y));
            case PairKind::Theta: return theta_product(x, y);
        }
        return x - y;
    }

    bool divides_by_points() const { return kind == PairKind::Bibasic || kind == PairKind::Theta; }

private:
    C a_{}, b_{};
    std::optional<QBase<C>> base_;

    C require(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end()) fail(ErrorKind::MissingParameter, "pair '" + name + "' needs parameter " + key);
        return it->second;
    }

    C theta_product(const C& x, const C& y) const {
        if (is_exact_zero(x) || is_exact_zero(y)) fail(ErrorKind::Domain, "theta pair has a pole at x = 0 or y = 0");
        return y * theta(x * y, *base_) * theta(x / y, *base_);
    }
};

template <class C>
FGPair<C> make_pair(const PairSpec& spec) {
    std::map<std::string, C> p;
    for (const auto& [k, v] : spec.params) p.emplace(k, from_complex<C>(v));
    return FGPair<C>(spec.name, pair_kind(spec.name), std::move(p));
}

template <class C>
FGPair<C> make_pair(const std::string& name, const std::map<std::string, Complex>& params = {}) {
    return make_pair<C>(PairSpec{name, params});
}

// The five kernel pairs with parameters bound. Needs a, b (bibasic) and q (theta).
template <class C>
std::vector<FGPair<C>> builtin_pairs(const std::map<std::string, Complex>& params) {
    for (const char* key : {"a", "b", "q"})
        if (!params.count(key)) fail(ErrorKind::MissingParameter, std::string("builtin_pairs needs parameter ") + key);
    std::vector<FGPair<C>> out;
    out.push_back(make_pair<C>("one-diff"));
    out.push_back(make_pair<C>("diff-diff"));
    out.push_back(make_pair<C>("onexy-diff"));
    out.push_back(make_pair<C>("bibasic", {{"a", params.at("a")}, {"b", params.at("b")}}));
    out.push_back(make_pair<C>("theta", {{"q", params.at("q")}}));
    return out;
}

template <class C>
C kernel_residual(const FGPair<C>& pair, const C& x, const C& a, const C& b, const C& c) {
    return pair.f(x, a) * pair.g(b, c) + pair.f(x, b) * pair.g(c, a) + pair.f(x, c) * pair.g(a, b);
}

// Residual with the magnitude of the largest of the six factors' products,
// which is what the kernel tolerance is relative to.
template <class C>
struct KernelSample {
    C residual{};
    double scale = 0;
    double relative() const { return mag(residual) / (scale > 0 ? scale : 1.0); }
};

template <class C>
KernelSample<C> kernel_residual_scaled(const FGPair<C>& pair, const C& x, const C& a, const C& b, const C& c) {
    C t1 = pair.f(x, a) * pair.g(b, c);
    C t2 = pair.f(x, b) * pair.g(c, a);
    C t3 = pair.f(x, c) * pair.g(a, b);
    KernelSample<C> s;
    s.residual = t1 + t2 + t3;
    s.scale = std::max({mag(t1), mag(t2), mag(t3)});
    return s;
}

// Deterministic sampler: the mapping from raw 64-bit draws to doubles is
// spelled out so reports do not depend on the library's distributions.
class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed) : rng_(seed) {}
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Complex point(double rmin, double rmax) {
        double r = uniform(rmin, rmax);
        double t = uniform(0.0, 2.0 * M_PI);
        return std::polar(r, t);
    }

private:
    std::mt19937_64 rng_;
};

struct KernelReport {
    std::string pair;
    int samples = 0;
    double max_relative = 0;
    double max_absolute = 0;
    std::vector<Complex> worst;  // x, a, b, c
    double tolerance = 0;
    bool passed = false;
};

template <class C>
KernelReport kernel_check(const FGPair<C>& pair, int samples, std::uint64_t seed, double tolerance,
                          double rmin = 0.1, double rmax = 2.0) {
    if (pair.divides_by_points() && rmin < 0.1) rmin = 0.1;
    PointSampler s(seed);
    KernelReport rep;
    rep.pair = pair.name;
    rep.samples = samples;
    rep.tolerance = tolerance;
    for (int i = 0; i < samples; ++i) {
        Complex pts[4];
        for (auto& p : pts) p = s.point(rmin, rmax);
        auto ks = kernel_residual_scaled(pair, from_complex<C>(pts[0]), from_complex<C>(pts[1]), from_complex<C>(pts[2]),
                                         from_complex<C>(pts[3]));
        double rel = ks.relative();
        rep.max_absolute = std::max(rep.max_absolute, mag(ks.residual));
        if (i == 0 || rel > rep.max_relative) {
            rep.max_relative = rel;
            rep.worst.assign(pts, pts + 4);
        }
    }
    rep.passed = rep.max_relative <= tolerance;
    return rep;
}

struct AntisymmetryReport {
    std::string pair;
    int samples = 0;
    double max_residual = 0;  // max |g(x,y) + g(y,x)|
    double max_relative = 0;  // the same divided by max(|g(x,y)|, |g(y,x)|, 1)
    Complex worst_x, worst_y;
    double tolerance = 0;
    bool passed = false;
};

template <class C>
AntisymmetryReport check_antisymmetry(const FGPair<C>& pair, int samples, std::uint64_t seed,
                                      double tolerance = 1e-12, double rmin = 0.1, double rmax = 2.0) {
    if (samples < 1) fail(ErrorKind::Domain, "check_antisymmetry needs samples >= 1");
    PointSampler s(seed);
    AntisymmetryReport rep;
    rep.pair = pair.name;
    rep.samples = samples;
    rep.tolerance = tolerance;
    for (int i = 0; i < samples; ++i) {
        Complex x = s.point(rmin, rmax), y = s.point(rmin, rmax);
        C gx = pair.g(from_complex<C>(x), from_complex<C>(y));
        C gy = pair.g(from_complex<C>(y), from_complex<C>(x));
        double res = mag(C(gx + gy));
        double rel = res / std::max({mag(gx), mag(gy), 1.0});
        if (i == 0 || res > rep.max_residual) {
            rep.worst_x = x;
            rep.worst_y = y;
        }
        rep.max_residual = std::max(rep.max_residual, res);
        rep.max_relative = std::max(rep.max_relative, rel);
    }
    rep.passed = rep.max_relative <= tolerance;
    return rep;
}

}  // namespace fgcalc
