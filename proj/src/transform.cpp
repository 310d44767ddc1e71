#include "nslab/transform.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace nslab {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct FourierWorkspace::Impl {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    fftw_complex* buffer = nullptr;
};

FourierWorkspace::FourierWorkspace(int n) : n_(n), impl_(std::make_unique<Impl>()) {
    const std::size_t count = static_cast<std::size_t>(n) * n * n;
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->buffer = fftw_alloc_complex(count);
    if (!impl_->buffer) throw Error("FFT buffer allocation failed");
    // FFTW_ESTIMATE: deterministic plan choice, results reproducible across runs.
    impl_->forward = fftw_plan_dft_3d(n, n, n, impl_->buffer, impl_->buffer,
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->inverse = fftw_plan_dft_3d(n, n, n, impl_->buffer, impl_->buffer,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->forward || !impl_->inverse) throw Error("FFT plan creation failed");
}

FourierWorkspace::~FourierWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->forward) fftw_destroy_plan(impl_->forward);
    if (impl_->inverse) fftw_destroy_plan(impl_->inverse);
    if (impl_->buffer) fftw_free(impl_->buffer);
}

void FourierWorkspace::forward(std::span<const cdouble> physical, std::span<cdouble> coefficients) {
    const std::size_t count = static_cast<std::size_t>(n_) * n_ * n_;
    if (physical.size() != count || coefficients.size() != count)
        throw Error("transform size mismatch: expected " + std::to_string(count) + " samples");
    std::memcpy(impl_->buffer, physical.data(), count * sizeof(cdouble));
    fftw_execute(impl_->forward);
    const double scale = 1.0 / static_cast<double>(count);
    auto* out = reinterpret_cast<const cdouble*>(impl_->buffer);
    for (std::size_t i = 0; i < count; ++i) coefficients[i] = out[i] * scale;
}

void FourierWorkspace::inverse(std::span<const cdouble> coefficients, std::span<cdouble> physical) {
    const std::size_t count = static_cast<std::size_t>(n_) * n_ * n_;
    if (physical.size() != count || coefficients.size() != count)
        throw Error("transform size mismatch: expected " + std::to_string(count) + " samples");
    std::memcpy(impl_->buffer, coefficients.data(), count * sizeof(cdouble));
    fftw_execute(impl_->inverse);
    std::memcpy(physical.data(), impl_->buffer, count * sizeof(cdouble));
}

std::array<std::vector<double>, 3> to_physical(const SpectralVelocityField& u,
                                               FourierWorkspace& ws) {
    const std::size_t count = u.grid.size();
    std::array<std::vector<double>, 3> out;
    std::vector<cdouble> phys(count);
    for (int c = 0; c < 3; ++c) {
        ws.inverse(u.coeffs[c], phys);
        out[c].resize(count);
        for (std::size_t i = 0; i < count; ++i) out[c][i] = phys[i].real();
    }
    return out;
}

SpectralVelocityField from_physical(const WaveGrid& grid,
                                    const std::array<std::vector<double>, 3>& samples,
                                    FourierWorkspace& ws) {
    const std::size_t count = grid.size();
    SpectralVelocityField u(grid);
    std::vector<cdouble> phys(count);
    for (int c = 0; c < 3; ++c) {
        if (samples[c].size() != count) throw Error("physical sample count does not match grid");
        for (std::size_t i = 0; i < count; ++i) phys[i] = cdouble{samples[c][i], 0.0};
        ws.forward(phys, u.coeffs[c]);
    }
    return u;
}

}  // namespace nslab
