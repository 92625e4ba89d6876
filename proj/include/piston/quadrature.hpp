#ifndef PISTON_QUADRATURE_HPP
#define PISTON_QUADRATURE_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace piston::quad {

// 15-point Gauss-Kronrod rule with the embedded 7-point Gauss rule.
// Abscissae/weights are the standard QUADPACK values.
namespace detail {
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
    double hl = 0.5 * (b - a);
    double c = 0.5 * (a + b);
    double resg = 0.0, resk = 0.0;
    for (int i = 0; i < 8; ++i) {
        double fv;
        if (i == 7) {
            fv = f(c);
        } else {
            fv = f(c - hl * kXgk[i]) + f(c + hl * kXgk[i]);
        }
        resk += kWgk[i] * fv;
        if (i % 2 == 1) resg += kWg[i / 2] * fv;
    }
    result = resk * hl;
    err = std::abs((resk - resg) * hl);
}
}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to the requested
/// relative tolerance (with a small absolute floor).  Throws on
/// non-convergence, listing the worst interval.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-12,
                 double abs_floor = 1e-300, int max_intervals = 4000) {
    struct Interval {
        double a, b, result, err;
    };
    std::vector<Interval> heap;
    Interval root{};
    root.a = a;
    root.b = b;
    detail::gk15(f, a, b, root.result, root.err);
    heap.push_back(root);
    double total = root.result, toterr = root.err;
    while (toterr > std::max(rel_tol * std::abs(total), abs_floor)) {
        // Split the interval with the largest error estimate.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].err > heap[worst].err) worst = i;
        Interval iv = heap[worst];
        if ((int)heap.size() >= max_intervals || iv.b - iv.a < 1e-15 * (std::abs(iv.a) + 1.0)) {
            std::ostringstream os;
            os << "adaptive quadrature failed to converge on [" << a << ", " << b
               << "]: " << heap.size() << " intervals, error " << toterr << " of total " << total
               << ", worst interval [" << iv.a << ", " << iv.b << "]";
            throw std::runtime_error(os.str());
        }
        double mid = 0.5 * (iv.a + iv.b);
        Interval left{}, right{};
        left.a = iv.a;
        left.b = mid;
        right.a = mid;
        right.b = iv.b;
        detail::gk15(f, left.a, left.b, left.result, left.err);
        detail::gk15(f, right.a, right.b, right.result, right.err);
        total += left.result + right.result - iv.result;
        toterr += left.err + right.err - iv.err;
        heap[worst] = left;
        heap.push_back(right);
    }
    return total;
}

/// Kahan compensated accumulator; keeps long mode sums reproducible.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace piston::quad

#endif
