#include "nslab/cutoff.hpp"

#include <algorithm>
#include <cmath>

namespace nslab {

CompactSpline::CompactSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() < 2 || knots_.size() != values_.size())
        throw Error("spline needs matching knot/value lists with at least two knots");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1])) throw Error("spline knots must be strictly increasing");
    if (values_.front() != 0.0 || values_.back() != 0.0)
        throw Error("compactly supported spline requires zero boundary values");

    // Natural C^2 cubic with clamped zero end slopes: solve the tridiagonal
    // system for interior slopes (Hermite form).
    const std::size_t n = knots_.size();
    slopes_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
        b[0] = 1.0;
        b[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = knots_[i] - knots_[i - 1];
            const double hr = knots_[i + 1] - knots_[i];
            a[i] = 1.0 / hl;
            b[i] = 2.0 * (1.0 / hl + 1.0 / hr);
            c[i] = 1.0 / hr;
            d[i] = 3.0 * ((values_[i] - values_[i - 1]) / (hl * hl) +
                          (values_[i + 1] - values_[i]) / (hr * hr));
        }
        // Thomas algorithm
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        slopes_[n - 1] = d[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) slopes_[i] = (d[i] - c[i] * slopes_[i + 1]) / b[i];
    }
}

int CompactSpline::segment(double t) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    return static_cast<int>(it - knots_.begin()) - 1;
}

double CompactSpline::operator()(double t) const {
    if (knots_.empty() || t <= knots_.front() || t >= knots_.back()) return 0.0;
    const int i = segment(t);
    const double h = knots_[i + 1] - knots_[i];
    const double s = (t - knots_[i]) / h;
    const double h00 = (1.0 + 2.0 * s) * sq(1.0 - s);
    const double h10 = s * sq(1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

double CompactSpline::derivative(double t) const {
    if (knots_.empty() || t <= knots_.front() || t >= knots_.back()) return 0.0;
    const int i = segment(t);
    const double h = knots_[i + 1] - knots_[i];
    const double s = (t - knots_[i]) / h;
    const double dh00 = 6.0 * s * (s - 1.0);
    const double dh10 = (1.0 - s) * (1.0 - 3.0 * s);
    const double dh01 = -dh00;
    const double dh11 = s * (3.0 * s - 2.0);
    return (dh00 * values_[i] + dh01 * values_[i + 1]) / h + dh10 * slopes_[i] + dh11 * slopes_[i + 1];
}

CutoffFunction::CutoffFunction(std::vector<CutoffTerm> terms) : terms_(std::move(terms)) {
    for (const auto& term : terms_) {
        cdouble dot{0.0, 0.0};
        double mag = 0.0;
        for (int c = 0; c < 3; ++c) {
            dot += static_cast<double>(term.wavevector[c]) * term.polarization[c];
            mag = std::max(mag, std::abs(term.polarization[c]));
        }
        if (mag > 0.0 && std::abs(dot) > 1e-12 * mag)
            throw Error("cutoff polarization must be orthogonal to its wavevector");
    }
}

namespace {

SpectralVelocityField assemble(const std::vector<CutoffTerm>& terms, const WaveGrid& grid,
                               bool derivative, double t) {
    SpectralVelocityField out(grid);
    out.time_tag = t;
    for (const auto& term : terms) {
        const double amp = derivative ? term.profile.derivative(t) : term.profile(t);
        if (amp == 0.0) continue;
        auto wrap = [&](int k) { return k >= 0 ? k : grid.n + k; };
        for (int c = 0; c < 3; ++c) {
            const int half = grid.n / 2;
            if (std::abs(term.wavevector[0]) > half || std::abs(term.wavevector[1]) > half ||
                std::abs(term.wavevector[2]) > half)
                throw Error("cutoff wavevector outside the grid");
        }
        const std::size_t idx =
            grid.index(wrap(term.wavevector[0]), wrap(term.wavevector[1]), wrap(term.wavevector[2]));
        const std::size_t cidx =
            grid.index(wrap(-term.wavevector[0]), wrap(-term.wavevector[1]), wrap(-term.wavevector[2]));
        for (int c = 0; c < 3; ++c) {
            out.coeffs[c][idx] += amp * 0.5 * term.polarization[c];
            out.coeffs[c][cidx] += amp * 0.5 * std::conj(term.polarization[c]);
        }
    }
    return out;
}

}  // namespace

SpectralVelocityField CutoffFunction::field_at(double t, const WaveGrid& grid) const {
    return assemble(terms_, grid, false, t);
}

SpectralVelocityField CutoffFunction::time_derivative_at(double t, const WaveGrid& grid) const {
    return assemble(terms_, grid, true, t);
}

}  // namespace nslab
