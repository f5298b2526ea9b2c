#ifndef CCDEC_MONTECARLO_HPP
#define CCDEC_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccdec/decoder2d.hpp"
#include "ccdec/decoder_cl.hpp"
#include "ccdec/rng.hpp"

namespace ccdec {

// 99% two-sided normal quantile used for all confidence intervals.
inline constexpr double kZ99 = 2.5758293035489004;

struct BinomialEstimate {
    uint64_t shots = 0;
    uint64_t failures = 0;
    double rate() const { return shots ? static_cast<double>(failures) / shots : 0.0; }
    // Wilson score interval.
    double ci_low(double z = kZ99) const {
        if (!shots) return 0.0;
        double n = static_cast<double>(shots), f = static_cast<double>(failures);
        double center = (f + z * z / 2) / (n + z * z);
        double half = z * std::sqrt(f * (n - f) / n + z * z / 4) / (n + z * z);
        return std::max(0.0, center - half);
    }
    double ci_high(double z = kZ99) const {
        if (!shots) return 1.0;
        double n = static_cast<double>(shots), f = static_cast<double>(failures);
        double center = (f + z * z / 2) / (n + z * z);
        double half = z * std::sqrt(f * (n - f) / n + z * z / 4) / (n + z * z);
        return std::min(1.0, center + half);
    }
};

// Samples detection events from a compressed error model. The model is kept
// before type separation so correlated (Y-like) mechanisms fire both their
// Z and X detectors together. Sampling skips geometrically between firing
// candidates under the max rate and thins to each mechanism's own rate, so a
// shot costs O(#mechanisms * q_max) on average. Shots are reproducible:
// shot i uses a dedicated counter-based stream.
class DemSampler {
  public:
    explicit DemSampler(const Dem& dem, uint64_t seed) : dem_(&dem), seed_(seed) {
        for (const Mechanism& m : dem.mechanisms) q_max_ = std::max(q_max_, m.q);
        if (q_max_ >= 1.0) throw std::invalid_argument("mechanism probability >= 1");
        log1mq_ = q_max_ > 0.0 ? std::log1p(-q_max_) : 0.0;
    }

    // Fills `events` (one bit per detector) and returns the observable flip.
    uint8_t sample(uint64_t shot, std::vector<uint8_t>& events) const {
        events.assign(dem_->detectors.size(), 0);
        uint8_t obs = 0;
        if (q_max_ <= 0.0) return obs;
        Rng rng(seed_, shot);
        size_t n = dem_->mechanisms.size();
        size_t i = 0;
        while (true) {
            // Geometric skip to the next index that fires under rate q_max.
            double u = rng.next_double_nonzero();
            double skip = std::floor(std::log(u) / log1mq_);
            if (skip >= static_cast<double>(n - i)) break;
            i += static_cast<size_t>(skip);
            const Mechanism& m = dem_->mechanisms[i];
            if (m.q >= q_max_ || rng.next_double() * q_max_ < m.q) {
                for (int d : m.detectors) events[d] ^= 1;
                if (!m.observables.empty()) obs ^= 1;
            }
            if (++i >= n) break;
        }
        return obs;
    }

    double q_max() const { return q_max_; }

  private:
    const Dem* dem_;
    uint64_t seed_;
    double q_max_ = 0.0;
    double log1mq_ = 0.0;
};

// One memory experiment (fixed basis, schedule, distance, rounds, noise):
// sampling plus decoding. The X-basis experiment of a schedule is the Z-basis
// experiment of the swapped schedule, so only Z-basis machinery exists here.
class MemoryExperiment {
  public:
    MemoryExperiment(int distance, int rounds, const CnotSchedule& sched, double p,
                     CircuitDecoderConfig config = {})
        : circuit_(build_memory_circuit(build_triangular(distance), sched, rounds)),
          compressed_(compress_dem(extract_dem(circuit_, p))),
          decoder_(separate_by_type(compressed_), config) {}

    const MemoryCircuit& circuit() const { return circuit_; }
    const Dem& compressed_dem() const { return compressed_; }
    const CircuitDecoder& decoder() const { return decoder_; }

    // Runs shots [first_shot, first_shot + shots) of the stream derived from
    // `seed`; disjoint shot ranges with the same seed never overlap.
    BinomialEstimate run(uint64_t shots, uint64_t seed, uint64_t first_shot = 0) const {
        DemSampler sampler(compressed_, seed);
        BinomialEstimate est;
        std::vector<uint8_t> events;
        for (uint64_t s = 0; s < shots; ++s) {
            uint8_t obs = sampler.sample(first_shot + s, events);
            ++est.shots;
            est.failures += decoder_.decode(events).correction != obs;
        }
        return est;
    }

  private:
    MemoryCircuit circuit_;
    Dem compressed_;
    CircuitDecoder decoder_;
};

struct MonteCarloConfig {
    uint64_t seed = 1;
    uint64_t initial_shots = 10000;
    uint64_t max_shots = 100000000;
    uint64_t target_failures = 100;  // stop doubling once both bases hit this
};

struct LogicalErrorEstimate {
    BinomialEstimate z_basis, x_basis;
    // Total logical error rate: failures of either basis. The two estimates
    // come from independent experiments, so rates add and CI half-widths
    // combine in quadrature.
    double rate() const { return z_basis.rate() + x_basis.rate(); }
    double ci_half(double z = kZ99) const {
        double hz = (z_basis.ci_high(z) - z_basis.ci_low(z)) / 2;
        double hx = (x_basis.ci_high(z) - x_basis.ci_low(z)) / 2;
        return std::sqrt(hz * hz + hx * hx);
    }
    double bias_log10() const {
        if (z_basis.failures == 0 || x_basis.failures == 0) return 0.0;
        return std::log10(z_basis.rate() / x_basis.rate());
    }
};

// Estimates the memory logical error rate for both bases with adaptive shot
// counts: starts at initial_shots, doubles until each basis saw
// target_failures failures or max_shots is reached.
inline LogicalErrorEstimate estimate_logical_error(int distance, int rounds,
                                                   const CnotSchedule& sched, double p,
                                                   const MonteCarloConfig& mc = {},
                                                   CircuitDecoderConfig config = {}) {
    MemoryExperiment ez(distance, rounds, sched, p, config);
    MemoryExperiment ex(distance, rounds, sched.swapped(), p, config);
    LogicalErrorEstimate est;
    uint64_t done = 0, next = std::min(mc.initial_shots, mc.max_shots);
    while (done < mc.max_shots) {
        uint64_t batch = next - done;
        BinomialEstimate bz = ez.run(batch, mc.seed, done);
        BinomialEstimate bx = ex.run(batch, mc.seed + 1, done);
        est.z_basis.shots += bz.shots;
        est.z_basis.failures += bz.failures;
        est.x_basis.shots += bx.shots;
        est.x_basis.failures += bx.failures;
        done = next;
        if (est.z_basis.failures >= mc.target_failures &&
            est.x_basis.failures >= mc.target_failures)
            break;
        next = std::min(done * 2, mc.max_shots);
    }
    return est;
}

// Code-capacity bit-flip experiment: iid X errors of rate p on the 2d
// lattice, one round of perfect syndrome extraction, matching decoder.
inline BinomialEstimate run_bitflip(const Decoder2d& dec, double p, uint64_t shots, uint64_t seed,
                                    uint64_t first_shot = 0) {
    if (!(p > 0.0) || p >= 1.0) throw std::invalid_argument("p must be in (0, 1)");
    BinomialEstimate est;
    const ColorLattice& lat = dec.lattice();
    size_t n = lat.vertices.size();
    double log1mp = std::log1p(-p);
    std::vector<int> error;
    for (uint64_t s = 0; s < shots; ++s) {
        Rng rng(seed, first_shot + s);
        error.clear();
        // Geometric skip over the qubit array.
        double pos = std::floor(std::log(rng.next_double_nonzero()) / log1mp);
        while (pos < static_cast<double>(n)) {
            error.push_back(static_cast<int>(pos));
            pos += 1.0 + std::floor(std::log(rng.next_double_nonzero()) / log1mp);
        }
        ++est.shots;
        Decoder2d::Result res = dec.decode(syndrome_from_error(lat, error));
        est.failures += dec.is_logical_failure(error, res.correction());
    }
    return est;
}

}  // namespace ccdec

#endif
