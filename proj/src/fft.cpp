#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace besovlab::detail {

namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

struct PlanPair {
    explicit PlanPair(std::size_t n)
        : real(n * sizeof(double)), half((n / 2 + 1) * sizeof(fftw_complex)) {
        auto* r = static_cast<double*>(real.ptr);
        auto* c = static_cast<fftw_complex*>(half.ptr);
        const int len = static_cast<int>(n);
        // ESTIMATE keeps plans (and hence results) deterministic across runs.
        r2c = fftw_plan_dft_r2c_1d(len, r, c, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_1d(len, c, r, FFTW_ESTIMATE);
    }
    ~PlanPair() {
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;

    FftwBuffer real;
    FftwBuffer half;
    fftw_plan r2c;
    fftw_plan c2r;
};

// The FFTW planner is not thread-safe; execution with new arrays is.
const PlanPair& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PlanPair>(n);
    return *slot;
}

struct Scratch {
    std::size_t n = 0;
    std::unique_ptr<FftwBuffer> real;
    std::unique_ptr<FftwBuffer> half;

    void ensure(std::size_t size) {
        if (n == size) return;
        real = std::make_unique<FftwBuffer>(size * sizeof(double));
        half = std::make_unique<FftwBuffer>((size / 2 + 1) * sizeof(fftw_complex));
        n = size;
    }
};

Scratch& scratch(std::size_t n) {
    thread_local Scratch s;
    s.ensure(n);
    return s;
}

} // namespace

void forward(std::span<const double> values, std::span<std::complex<double>> coeffs) {
    const std::size_t n = values.size();
    const auto& plan = plans_for(n);
    auto& s = scratch(n);
    auto* r = static_cast<double*>(s.real->ptr);
    auto* c = static_cast<fftw_complex*>(s.half->ptr);
    std::copy(values.begin(), values.end(), r);
    fftw_execute_dft_r2c(plan.r2c, r, c);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double sign = (k % 2 == 0) ? scale : -scale;
        coeffs[k] = {c[k][0] * sign, c[k][1] * sign};
    }
}

void inverse(std::span<const std::complex<double>> coeffs, std::span<double> values) {
    const std::size_t n = values.size();
    const auto& plan = plans_for(n);
    auto& s = scratch(n);
    auto* r = static_cast<double*>(s.real->ptr);
    auto* c = static_cast<fftw_complex*>(s.half->ptr);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        c[k][0] = coeffs[k].real() * sign;
        c[k][1] = coeffs[k].imag() * sign;
    }
    // c2r reads only the real part of the DC and Nyquist bins.
    fftw_execute_dft_c2r(plan.c2r, c, r);
    std::copy(r, r + n, values.begin());
}

} // namespace besovlab::detail

namespace besovlab::detail {

const char* backend_version() { return fftw_version; }

} // namespace besovlab::detail
