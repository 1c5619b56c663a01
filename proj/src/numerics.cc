#include "fockherald/numerics.h"

#include <cmath>
#include <stdexcept>

namespace fockherald {

RootResult bisect_root(const std::function<double(double)> &f, double lo, double hi, double x_tolerance) {
    if (!(lo <= hi)) {
        throw std::invalid_argument("bisect_root: empty interval");
    }
    double f_lo = f(lo);
    if (f_lo == 0.0) return {lo, 0};
    double f_hi = f(hi);
    if (f_hi == 0.0) return {hi, 0};
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw std::invalid_argument("bisect_root: interval does not bracket a root");
    }

    int iterations = 0;
    while (true) {
        double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi || hi - lo <= x_tolerance) {
            break;
        }
        ++iterations;
        double f_mid = f(mid);
        if (f_mid == 0.0) {
            return {mid, iterations};
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return {lo + (hi - lo) / 2, iterations};
}

MaximumResult golden_section_maximize(
    const std::function<double(double)> &f, double lo, double hi, double x_tolerance) {
    if (!(lo <= hi)) {
        throw std::invalid_argument("golden_section_maximize: empty interval");
    }
    if (!(x_tolerance > 0.0)) {
        throw std::invalid_argument("golden_section_maximize: tolerance must be positive");
    }
    if (lo == hi) {
        return {lo, f(lo), 1};
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    int evaluations = 2;
    while (hi - lo > x_tolerance) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
        ++evaluations;
    }
    return fc >= fd ? MaximumResult{c, fc, evaluations} : MaximumResult{d, fd, evaluations};
}

}  // namespace fockherald
