#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "opfunc/errors.hpp"

namespace opfunc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A non-degenerate real interval with possibly infinite endpoints.
/// Closed endpoints must be finite.
class Interval {
  public:
    Interval(double lo, double hi, bool lo_closed = false, bool hi_closed = false)
        : lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {
        if (!(lo < hi)) throw Error("interval endpoints must satisfy lo < hi");
        if (std::isnan(lo) || std::isnan(hi)) throw Error("interval endpoint is NaN");
        if (lo_closed && !std::isfinite(lo)) throw Error("closed endpoint must be finite");
        if (hi_closed && !std::isfinite(hi)) throw Error("closed endpoint must be finite");
    }

    static Interval open(double lo, double hi) { return Interval(lo, hi, false, false); }
    static Interval closed(double lo, double hi) { return Interval(lo, hi, true, true); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }
    bool lo_finite() const { return std::isfinite(lo_); }
    bool hi_finite() const { return std::isfinite(hi_); }
    bool bounded() const { return lo_finite() && hi_finite(); }
    double length() const { return hi_ - lo_; }

    /// Membership test. At open endpoints a point must clear the endpoint by
    /// `tol`; at closed endpoints it may undershoot by `tol`.
    bool contains(double t, double tol = 0.0) const {
        const double mlo = tol * std::max(1.0, std::abs(lo_));
        const double mhi = tol * std::max(1.0, std::abs(hi_));
        bool ok_lo = lo_closed_ ? (t >= lo_ - mlo) : (t > lo_ + mlo);
        bool ok_hi = hi_closed_ ? (t <= hi_ + mhi) : (t < hi_ - mhi);
        if (!lo_finite()) ok_lo = true;
        if (!hi_finite()) ok_hi = true;
        return ok_lo && ok_hi;
    }

    /// The compact core [a, b] obtained by retreating from both endpoints.
    /// Bounded intervals retreat by eps * length per side; intervals with an
    /// infinite side retreat finite sides by eps absolute and clip infinite
    /// sides at +-cap.
    std::pair<double, double> retreated_core(double eps, double cap = 1e4) const {
        if (eps < 0) throw Error("retreat must be non-negative");
        double a, b;
        if (bounded()) {
            const double d = eps * length();
            a = lo_ + d;
            b = hi_ - d;
        } else {
            a = lo_finite() ? lo_ + eps : -cap;
            b = hi_finite() ? hi_ - eps : cap;
        }
        if (!(a < b)) throw EmptyCoreError("retreat exhausts the interval");
        return {a, b};
    }

    std::string str() const {
        std::ostringstream os;
        os << (lo_closed_ ? '[' : '(');
        if (lo_finite()) os << lo_; else os << "-inf";
        os << ", ";
        if (hi_finite()) os << hi_; else os << "inf";
        os << (hi_closed_ ? ']' : ')');
        return os.str();
    }

  private:
    double lo_, hi_;
    bool lo_closed_, hi_closed_;
};

}  // namespace opfunc
