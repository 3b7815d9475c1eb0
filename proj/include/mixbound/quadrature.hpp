#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mixbound {

// Adaptive Gauss-Kronrod (G7,K15) quadrature.  Refines the interval with the
// largest error estimate until total error <= rel_tol * |integral| + 1e-300.
// Throws std::runtime_error if the refinement cap is reached.
namespace detail {

// Kronrod 15-point nodes/weights on [-1,1] and the embedded Gauss 7 weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double* integral, double* err) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    *integral = resk * h;
    *err = std::fabs((resk - resg) * h);
}

}  // namespace detail

template <typename F>
double adaptive_quadrature(const F& f, double a, double b, double rel_tol) {
    if (!(a <= b)) throw std::invalid_argument("adaptive_quadrature: a > b");
    if (a == b) return 0.0;
    struct Segment {
        double a, b, integral, err;
    };
    std::vector<Segment> segs;
    Segment s0{a, b, 0.0, 0.0};
    detail::gk15(f, a, b, &s0.integral, &s0.err);
    segs.push_back(s0);
    constexpr std::size_t kMaxSegments = 8192;
    for (;;) {
        double total = 0.0, toterr = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].integral;
            toterr += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (toterr <= rel_tol * std::fabs(total) + 1e-300) return total;
        if (segs.size() >= kMaxSegments) {
            throw std::runtime_error("adaptive_quadrature: refinement cap reached");
        }
        Segment w = segs[worst];
        double mid = 0.5 * (w.a + w.b);
        Segment left{w.a, mid, 0.0, 0.0}, right{mid, w.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, &left.integral, &left.err);
        detail::gk15(f, right.a, right.b, &right.integral, &right.err);
        segs[worst] = left;
        segs.push_back(right);
    }
}

}  // namespace mixbound
