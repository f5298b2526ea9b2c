#ifndef CCDEC_ANALYSIS_HPP
#define CCDEC_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace ccdec {

// Ordinary least squares y = slope*x + intercept with Student-t confidence
// intervals (default 99%). With fewer than 3 points the residual variance is
// undefined and the intervals collapse to the point estimates.
struct LinearFit {
    int n = 0;
    double slope = 0.0, intercept = 0.0;
    double slope_stderr = 0.0, intercept_stderr = 0.0;
    double slope_ci_low = 0.0, slope_ci_high = 0.0;
    double intercept_ci_low = 0.0, intercept_ci_high = 0.0;
    double x_mean = 0.0, sxx = 0.0, sigma2 = 0.0;  // for prediction intervals

    double predict(double x) const { return slope * x + intercept; }
    // Standard error of the fitted mean response at x. A floor on the
    // residual variance keeps the x-dependence meaningful for noiseless data
    // (argmin of the uncertainty is then the design-matrix optimum).
    double predict_stderr(double x) const {
        if (n < 3 || sxx <= 0.0) return 0.0;
        double s2 = std::max(sigma2, std::numeric_limits<double>::min());
        return std::sqrt(s2 * (1.0 / n + (x - x_mean) * (x - x_mean) / sxx));
    }
};

inline LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y,
                         double confidence = 0.99) {
    if (x.size() != y.size()) throw std::invalid_argument("x/y size mismatch");
    size_t n = x.size();
    if (n < 2) throw std::invalid_argument("need at least 2 points");
    double xm = 0, ym = 0;
    for (size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    if (sxx <= 0.0) throw std::invalid_argument("x values are all identical");
    LinearFit f;
    f.n = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    f.x_mean = xm;
    f.sxx = sxx;
    f.slope_ci_low = f.slope_ci_high = f.slope;
    f.intercept_ci_low = f.intercept_ci_high = f.intercept;
    if (n >= 3) {
        double ss = 0;
        for (size_t i = 0; i < n; ++i) {
            double r = y[i] - f.predict(x[i]);
            ss += r * r;
        }
        f.sigma2 = ss / (n - 2);
        f.slope_stderr = std::sqrt(f.sigma2 / sxx);
        f.intercept_stderr = std::sqrt(f.sigma2 * (1.0 / n + xm * xm / sxx));
        boost::math::students_t_distribution<double> dist(static_cast<double>(n - 2));
        double t = boost::math::quantile(dist, 0.5 + confidence / 2);
        f.slope_ci_low = f.slope - t * f.slope_stderr;
        f.slope_ci_high = f.slope + t * f.slope_stderr;
        f.intercept_ci_low = f.intercept - t * f.intercept_stderr;
        f.intercept_ci_high = f.intercept + t * f.intercept_stderr;
    }
    return f;
}

// ---- Sub-threshold scaling ansatz ------------------------------------------
//
// Model (base-10 logs): pfail/T = alpha * (p / p_star)^(beta*(d - d0) + eta),
// i.e. log(pfail/T) = G(d) log p + C(d) with G(d) = beta*(d - d0) + eta and
// C(d) = -beta*log(p_star)*(d - d0) + log(alpha) - eta*log(p_star).

struct SubthresholdPoint {
    int d = 0;
    double p = 0.0;
    double pfail_per_round = 0.0;
};

struct AnsatzFit {
    std::map<int, LinearFit> per_d;  // stage 1: G(d) = slope, C(d) = intercept
    LinearFit g_fit, c_fit;          // stage 2: G and C against d
    int d0 = 0;
    double beta = 0.0, eta = 0.0;
    double p_star = 0.0, alpha = 0.0;
    bool degenerate = false;  // beta == 0: p_star/alpha not reconstructible
};

// Two-stage regression: per-d OLS of log10(pfail/T) on log10 p, then OLS of
// the per-d slopes and intercepts on d. The offset d0 is the integer in
// [min d, max d] minimizing the uncertainty of the predicted G(d0) (= eta)
// and C(d0); when the two minimizers differ their average is rounded.
inline AnsatzFit fit_subthreshold(const std::vector<SubthresholdPoint>& points) {
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_d;
    for (const SubthresholdPoint& pt : points) {
        if (!(pt.p > 0.0) || !(pt.pfail_per_round > 0.0))
            throw std::invalid_argument("p and pfail must be positive");
        by_d[pt.d].first.push_back(std::log10(pt.p));
        by_d[pt.d].second.push_back(std::log10(pt.pfail_per_round));
    }
    if (by_d.size() < 3) throw std::invalid_argument("need at least 3 distinct distances");
    AnsatzFit fit;
    std::vector<double> ds, gs, cs;
    for (auto& [d, xy] : by_d) {
        if (xy.first.size() < 3)
            throw std::invalid_argument("need at least 3 points per distance");
        LinearFit lf = ols_fit(xy.first, xy.second);
        fit.per_d[d] = lf;
        ds.push_back(d);
        gs.push_back(lf.slope);
        cs.push_back(lf.intercept);
    }
    fit.g_fit = ols_fit(ds, gs);
    fit.c_fit = ols_fit(ds, cs);

    int dmin = static_cast<int>(ds.front()), dmax = static_cast<int>(ds.back());
    auto argmin_pred = [&](const LinearFit& lf) {
        int best = dmin;
        double best_se = lf.predict_stderr(dmin);
        for (int c = dmin + 1; c <= dmax; ++c) {
            double se = lf.predict_stderr(c);
            if (se < best_se) {
                best_se = se;
                best = c;
            }
        }
        return best;
    };
    int d0g = argmin_pred(fit.g_fit), d0c = argmin_pred(fit.c_fit);
    fit.d0 = static_cast<int>(std::llround((d0g + d0c) / 2.0));

    fit.beta = fit.g_fit.slope;
    fit.eta = fit.g_fit.predict(fit.d0);
    if (fit.beta == 0.0) {
        fit.degenerate = true;
        return fit;
    }
    double log_pstar = -fit.c_fit.slope / fit.beta;
    fit.p_star = std::pow(10.0, log_pstar);
    double log_alpha = fit.c_fit.predict(fit.d0) + fit.eta * log_pstar;
    fit.alpha = std::pow(10.0, log_alpha);
    return fit;
}

// ---- Threshold crossing -----------------------------------------------------

struct CurvePoint {
    double p = 0.0;
    double pfail = 0.0;
};

class NoCrossingError : public std::runtime_error {
  public:
    explicit NoCrossingError(const std::string& what) : std::runtime_error(what) {}
};

// Crossing of two failure-rate curves: both are fitted with local linear
// regressions in log-log space around the current crossing estimate (window =
// the 2/3 of each curve's points nearest in log p, at least 3) and the fit
// lines intersected, iterating to a fixed point. Falls back to the full-range
// fit on the first pass. Errors when the lines are parallel or the crossing
// leaves the sampled range.
inline double find_crossing(const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b) {
    auto logs = [](const std::vector<CurvePoint>& c) {
        std::vector<std::pair<double, double>> out;
        for (const CurvePoint& pt : c) {
            if (!(pt.p > 0.0) || !(pt.pfail > 0.0))
                throw std::invalid_argument("curve points must be positive");
            out.push_back({std::log10(pt.p), std::log10(pt.pfail)});
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    std::vector<std::pair<double, double>> la = logs(a), lb = logs(b);
    if (la.size() < 3 || lb.size() < 3) throw std::invalid_argument("need at least 3 points");
    double lo = std::max(la.front().first, lb.front().first);
    double hi = std::min(la.back().first, lb.back().first);
    if (lo > hi) throw std::invalid_argument("curves do not overlap in p");

    auto local_fit = [](const std::vector<std::pair<double, double>>& pts, double center,
                        bool full) {
        std::vector<std::pair<double, double>> sel(pts);
        if (!full) {
            size_t k = std::max<size_t>(3, (2 * pts.size() + 2) / 3);
            std::sort(sel.begin(), sel.end(), [&](const auto& u, const auto& v) {
                return std::abs(u.first - center) < std::abs(v.first - center);
            });
            sel.resize(std::min(k, sel.size()));
        }
        std::vector<double> xs, ys;
        for (auto& [x, y] : sel) {
            xs.push_back(x);
            ys.push_back(y);
        }
        return ols_fit(xs, ys);
    };

    double x = 0.5 * (lo + hi);
    bool full = true;
    for (int iter = 0; iter < 200; ++iter) {
        LinearFit fa = local_fit(la, x, full), fb = local_fit(lb, x, full);
        full = false;
        double ds = fa.slope - fb.slope;
        if (std::abs(ds) < 1e-12) throw NoCrossingError("curves are parallel");
        double nx = (fb.intercept - fa.intercept) / ds;
        if (nx < lo - 1e-9 || nx > hi + 1e-9)
            throw NoCrossingError("crossing outside the sampled range");
        if (std::abs(nx - x) < 1e-12) return std::pow(10.0, nx);
        x = nx;
    }
    return std::pow(10.0, x);
}

// Threshold extrapolation: crossings of (d1, d2) pairs behave as
// p~x(d1) = A/d1 + px; OLS of the crossing against 1/d1 yields px as the
// intercept.
struct ThresholdExtrapolation {
    double threshold = 0.0;  // intercept
    double amplitude = 0.0;  // A
    LinearFit fit;
};

inline ThresholdExtrapolation extrapolate_threshold(
    const std::vector<std::pair<int, double>>& crossings) {
    if (crossings.size() < 2) throw std::invalid_argument("need at least 2 crossings");
    std::vector<double> x, y;
    for (auto& [d1, px] : crossings) {
        if (d1 <= 0) throw std::invalid_argument("distance must be positive");
        x.push_back(1.0 / d1);
        y.push_back(px);
    }
    ThresholdExtrapolation out;
    out.fit = ols_fit(x, y);
    out.threshold = out.fit.intercept;
    out.amplitude = out.fit.slope;
    return out;
}

// ---- Long-term threshold fit ------------------------------------------------
//
// px(T) = P * (1 - (1 - px(1)/P) * T^(-gamma)) with P and gamma free and
// px(1) pinned to the T=1 data point. Levenberg-Marquardt on the squared
// residuals, numeric Jacobian, tolerance 1e-12, at most 10^4 iterations.

struct LongTermFit {
    double p_longterm = 0.0;
    double gamma = 0.0;
    int iterations = 0;
};

inline LongTermFit fit_longterm(const std::vector<std::pair<int, double>>& thresholds) {
    if (thresholds.size() < 3) throw std::invalid_argument("need at least 3 points");
    double p1 = 0.0;
    bool have_p1 = false;
    std::vector<double> ts, ys;
    for (auto& [t, px] : thresholds) {
        if (t < 1 || !(px > 0.0)) throw std::invalid_argument("invalid threshold point");
        if (t == 1) {
            p1 = px;
            have_p1 = true;
        } else {
            ts.push_back(t);
            ys.push_back(px);
        }
    }
    if (!have_p1) throw std::invalid_argument("missing the T=1 point");
    if (ts.size() < 2) throw std::invalid_argument("need at least 2 points beyond T=1");

    auto model = [&](double P, double g, double T) {
        return P * (1.0 - (1.0 - p1 / P) * std::pow(T, -g));
    };
    auto cost = [&](double P, double g) {
        double s = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            double r = model(P, g, ts[i]) - ys[i];
            s += r * r;
        }
        return s;
    };

    double P = *std::max_element(ys.begin(), ys.end());
    if (P <= p1) P = p1 * 1.5;
    double g = 1.0;
    double lambda = 1e-3;
    double c = cost(P, g);
    LongTermFit out;
    for (int it = 0; it < 10000; ++it) {
        out.iterations = it + 1;
        // Numeric Jacobian and normal equations for 2 parameters.
        double hP = std::max(1e-10, 1e-7 * std::abs(P));
        double hg = std::max(1e-10, 1e-7 * std::abs(g));
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            double r = model(P, g, ts[i]) - ys[i];
            double jP = (model(P + hP, g, ts[i]) - model(P - hP, g, ts[i])) / (2 * hP);
            double jg = (model(P, g + hg, ts[i]) - model(P, g - hg, ts[i])) / (2 * hg);
            a11 += jP * jP;
            a12 += jP * jg;
            a22 += jg * jg;
            b1 -= jP * r;
            b2 -= jg * r;
        }
        double m11 = a11 * (1 + lambda), m22 = a22 * (1 + lambda);
        double det = m11 * m22 - a12 * a12;
        if (det == 0.0 || !std::isfinite(det)) break;
        double dP = (b1 * m22 - b2 * a12) / det;
        double dg = (b2 * m11 - b1 * a12) / det;
        double nc = cost(P + dP, g + dg);
        if (nc < c) {
            P += dP;
            g += dg;
            lambda = std::max(lambda * 0.5, 1e-12);
            if (c - nc < 1e-12 * (1.0 + c)) {
                c = nc;
                break;
            }
            c = nc;
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }
    out.p_longterm = P;
    out.gamma = g;
    return out;
}

// Bias between the Z- and X-basis failure rates in decades.
inline double bias_log10(double p_z, double p_x) {
    if (!(p_z > 0.0) || !(p_x > 0.0)) throw std::invalid_argument("rates must be positive");
    return std::log10(p_z / p_x);
}

}  // namespace ccdec

#endif
