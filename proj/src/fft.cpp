#include "novikov/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace novikov::detail {

namespace {

// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Workspace {
public:
    explicit Workspace(int n)
        : n_(n), real_(fftw_alloc_real(static_cast<std::size_t>(n))),
          spec_(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)))
    {
        std::lock_guard lock(planner_mutex());
        forward_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
        inverse_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
        if (forward_ == nullptr || inverse_ == nullptr) {
            throw std::runtime_error("fftw: plan creation failed");
        }
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    ~Workspace()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(inverse_);
        fftw_destroy_plan(forward_);
        fftw_free(spec_);
        fftw_free(real_);
    }

    void forward(std::span<const double> in, std::span<std::complex<double>> out)
    {
        std::copy(in.begin(), in.end(), real_);
        fftw_execute(forward_);
        const double scale = 1.0 / n_;
        for (int k = 0; k <= n_ / 2; ++k) {
            out[static_cast<std::size_t>(k)] = {spec_[k][0] * scale, spec_[k][1] * scale};
        }
    }

    void inverse(std::span<const std::complex<double>> in, std::span<double> out)
    {
        for (int k = 0; k <= n_ / 2; ++k) {
            spec_[k][0] = in[static_cast<std::size_t>(k)].real();
            spec_[k][1] = in[static_cast<std::size_t>(k)].imag();
        }
        fftw_execute(inverse_);
        std::copy(real_, real_ + n_, out.begin());
    }

private:
    int n_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

Workspace& workspace(int n)
{
    thread_local std::unordered_map<int, std::unique_ptr<Workspace>> cache;
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<Workspace>(n);
    }
    return *slot;
}

} // namespace

void forward_real(std::span<const double> in, std::span<std::complex<double>> out)
{
    const int n = static_cast<int>(in.size());
    if (out.size() != static_cast<std::size_t>(n / 2 + 1)) {
        throw std::invalid_argument("forward_real: output size mismatch");
    }
    workspace(n).forward(in, out);
}

void inverse_real(std::span<const std::complex<double>> in, std::span<double> out)
{
    const int n = static_cast<int>(out.size());
    if (in.size() != static_cast<std::size_t>(n / 2 + 1)) {
        throw std::invalid_argument("inverse_real: input size mismatch");
    }
    workspace(n).inverse(in, out);
}

} // namespace novikov::detail
