#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace blowup::fft {

// Thin wrapper around FFTW c2c transforms. Plans are cached per shape and
// created under a lock (FFTW plan creation is not thread safe); execution
// uses the new-array interface, which is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    struct Plans {
        fftw_plan forward;
        fftw_plan inverse;
    };

    Plans get(int n0, int n1) {
        std::scoped_lock lock(mutex_);
        auto key = std::make_pair(n0, n1);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        const std::size_t total = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
        fftw_complex* in = fftw_alloc_complex(total);
        fftw_complex* out = fftw_alloc_complex(total);
        Plans p{};
        if (n1 > 0) {
            p.forward = fftw_plan_dft_2d(n0, n1, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
            p.inverse = fftw_plan_dft_2d(n0, n1, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            p.forward = fftw_plan_dft_1d(n0, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
            p.inverse = fftw_plan_dft_1d(n0, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<int, int>, Plans> plans_;
};

// Forward DFT, normalized so that coefficients are trig-polynomial
// coefficients: f_j = sum_k c_k exp(i xi_k x_j).
inline std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in,
                                                 int n0, int n1 = 0) {
    const std::size_t total = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
    if (in.size() != total) throw std::invalid_argument("fft::forward: size mismatch");
    std::vector<std::complex<double>> out(total);
    auto plans = PlanCache::instance().get(n0, n1);
    fftw_execute_dft(plans.forward,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(total);
    for (auto& c : out) c *= scale;
    return out;
}

inline std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in,
                                                 int n0, int n1 = 0) {
    const std::size_t total = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
    if (in.size() != total) throw std::invalid_argument("fft::inverse: size mismatch");
    std::vector<std::complex<double>> out(total);
    auto plans = PlanCache::instance().get(n0, n1);
    fftw_execute_dft(plans.inverse,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace blowup::fft
