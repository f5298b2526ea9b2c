#ifndef CCDEC_DEM_HPP
#define CCDEC_DEM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccdec/circuit.hpp"

namespace ccdec {

// Rates of the independent-axis decomposition of depolarizing noise: a
// one-qubit depolarizing channel of strength p equals independent X and Z
// flip channels firing with rate q each (Y = both), so q(1-q) = p/3; the
// two-qubit channel equals eight independent single-axis flips of rate q
// with (1-2q)^8 = 1 - 16p/15. Extraction below enumerates the exact channel
// elements instead, so these only serve as cross-checks and approximations.
inline double dep1_axis_probability(double p) { return (1.0 - std::sqrt(1.0 - 4.0 * p / 3.0)) / 2.0; }
inline double dep2_axis_probability(double p) {
    return (1.0 - std::pow(1.0 - 16.0 * p / 15.0, 0.125)) / 2.0;
}

// Exclusive-or of two independent flip probabilities.
inline double combine_flip_probability(double a, double b) { return a + b - 2.0 * a * b; }

struct Mechanism {
    double q = 0.0;
    std::vector<int> detectors;    // sorted
    std::vector<int> observables;  // sorted
};

struct DetectorMeta {
    PauliType type = PauliType::kZ;
    int face = -1;
    int round = -1;
    Color color = Color::kRed;
    bool is_virtual = false;
    int source_mechanism = -1;  // restricted mechanism behind a virtual detector
};

struct Dem {
    std::vector<Mechanism> mechanisms;
    std::vector<DetectorMeta> detectors;
    int num_observables = 1;
};

// One elementary fault: Pauli (x,z) on up to two qubits injected right after
// the given operation, or a flip of that operation's measurement record.
struct Fault {
    int slice = -1;
    int op = -1;
    bool record_flip = false;
    uint8_t x0 = 0, z0 = 0;  // Pauli on op.q0
    uint8_t x1 = 0, z1 = 0;  // Pauli on op.q1 (CNOT only)
};

// Propagates a fault through the rest of the circuit with a Pauli frame and
// returns the measurement records it flips, sorted.
inline std::vector<int> propagate_fault(const MemoryCircuit& c, const Fault& f,
                                        std::vector<uint8_t>& xf, std::vector<uint8_t>& zf) {
    std::fill(xf.begin(), xf.end(), 0);
    std::fill(zf.begin(), zf.end(), 0);
    std::vector<int> flips;
    const Operation& src = c.slices[f.slice].ops[f.op];
    if (f.record_flip) {
        flips.push_back(src.meas_index);
        return flips;
    }
    xf[src.q0] = f.x0;
    zf[src.q0] = f.z0;
    if (src.q1 >= 0) {
        xf[src.q1] = f.x1;
        zf[src.q1] = f.z1;
    }
    // Ops within a slice touch disjoint qubits, so continuing from the next
    // slice is equivalent to injecting right after the faulty gate.
    for (size_t s = f.slice + 1; s < c.slices.size(); ++s)
        for (const Operation& op : c.slices[s].ops) switch (op.type) {
                case OpType::kCnot:
                    xf[op.q1] ^= xf[op.q0];
                    zf[op.q0] ^= zf[op.q1];
                    break;
                case OpType::kPrepZ:
                case OpType::kPrepX:
                    xf[op.q0] = zf[op.q0] = 0;
                    break;
                case OpType::kMeasZ:
                    if (xf[op.q0]) flips.push_back(op.meas_index);
                    break;
                case OpType::kMeasX:
                    if (zf[op.q0]) flips.push_back(op.meas_index);
                    break;
                case OpType::kIdle:
                    break;
            }
    std::sort(flips.begin(), flips.end());
    return flips;
}

// Uniform circuit-level noise of strength p: a measurement-record flip and a
// preparation flip with probability p each, one-qubit depolarizing after
// idles, two-qubit depolarizing after CNOTs.
inline Dem extract_dem(const MemoryCircuit& c, double p) {
    if (!(p > 0.0) || p >= 0.5) throw std::invalid_argument("noise strength must be in (0, 0.5)");
    Dem dem;
    dem.detectors.reserve(c.detectors.size());
    for (const DetectorDef& d : c.detectors)
        dem.detectors.push_back({d.type, d.face, d.round, d.color, false, -1});
    dem.num_observables = 1;

    // Measurement record -> detectors / observable membership.
    std::vector<std::vector<int>> det_of_meas(c.num_measurements);
    for (const DetectorDef& d : c.detectors)
        for (int m : d.measurements) det_of_meas[m].push_back(d.id);
    std::vector<uint8_t> obs_of_meas(c.num_measurements, 0);
    for (int m : c.observable) obs_of_meas[m] ^= 1;

    std::vector<uint8_t> xf(c.num_qubits), zf(c.num_qubits);
    std::vector<uint8_t> det_par(c.detectors.size(), 0);
    auto emit = [&](const Fault& f, double q) {
        std::vector<int> flips = propagate_fault(c, f, xf, zf);
        Mechanism m;
        m.q = q;
        int obs = 0;
        for (int rec : flips) {
            for (int d : det_of_meas[rec]) det_par[d] ^= 1;
            obs ^= obs_of_meas[rec];
        }
        for (int rec : flips)
            for (int d : det_of_meas[rec])
                if (det_par[d]) {
                    m.detectors.push_back(d);
                    det_par[d] = 0;
                }
        std::sort(m.detectors.begin(), m.detectors.end());
        if (obs) m.observables.push_back(0);
        if (!m.detectors.empty() || !m.observables.empty()) dem.mechanisms.push_back(std::move(m));
    };

    double dep1 = p / 3.0;
    double dep2 = p / 15.0;
    for (size_t s = 0; s < c.slices.size(); ++s)
        for (size_t o = 0; o < c.slices[s].ops.size(); ++o) {
            const Operation& op = c.slices[s].ops[o];
            Fault f;
            f.slice = static_cast<int>(s);
            f.op = static_cast<int>(o);
            switch (op.type) {
                case OpType::kIdle:
                    // X, Y, Z each with p/3.
                    for (int pa = 1; pa < 4; ++pa) {
                        f.x0 = pa & 1;
                        f.z0 = (pa >> 1) & 1;
                        emit(f, dep1);
                    }
                    break;
                case OpType::kCnot:
                    for (int pa = 1; pa < 16; ++pa) {
                        f.x0 = pa & 1;
                        f.z0 = (pa >> 1) & 1;
                        f.x1 = (pa >> 2) & 1;
                        f.z1 = (pa >> 3) & 1;
                        emit(f, dep2);
                    }
                    f.x1 = f.z1 = 0;
                    break;
                case OpType::kPrepZ:
                    f.x0 = 1;
                    f.z0 = 0;
                    emit(f, p);
                    break;
                case OpType::kPrepX:
                    f.x0 = 0;
                    f.z0 = 1;
                    emit(f, p);
                    break;
                case OpType::kMeasZ:
                case OpType::kMeasX:
                    f.record_flip = true;
                    emit(f, p);
                    f.record_flip = false;
                    break;
            }
            f.x0 = f.z0 = f.x1 = f.z1 = 0;
        }
    return dem;
}

// Merges mechanisms with identical detector and observable sets, combining
// probabilities as independent flips. Mechanisms that flip nothing are
// dropped; purely logical mechanisms are kept.
inline Dem compress_dem(const Dem& in) {
    Dem out;
    out.detectors = in.detectors;
    out.num_observables = in.num_observables;
    std::map<std::pair<std::vector<int>, std::vector<int>>, double> acc;
    for (const Mechanism& m : in.mechanisms) {
        if (m.detectors.empty() && m.observables.empty()) continue;
        double& q = acc[{m.detectors, m.observables}];
        q = combine_flip_probability(q, m.q);
    }
    for (auto& [key, q] : acc) {
        if (q <= 0.0) continue;
        out.mechanisms.push_back({q, key.first, key.second});
    }
    return out;
}

// Splits every mechanism into its Z-type and X-type detector parts (the two
// parts are independent once Pauli faults are separated into X and Z
// components; the logical observable rides with the Z-type part) and
// re-compresses.
inline Dem separate_by_type(const Dem& dem) {
    Dem out;
    out.detectors = dem.detectors;
    out.num_observables = dem.num_observables;
    for (const Mechanism& m : dem.mechanisms) {
        Mechanism z, x;
        z.q = x.q = m.q;
        for (int d : m.detectors)
            (dem.detectors[d].type == PauliType::kZ ? z : x).detectors.push_back(d);
        z.observables = m.observables;
        if (!z.detectors.empty() || !z.observables.empty()) out.mechanisms.push_back(std::move(z));
        if (!x.detectors.empty()) out.mechanisms.push_back(std::move(x));
    }
    return compress_dem(out);
}

struct DecomposedDem {
    Color color = Color::kRed;
    int num_circuit_detectors = 0;
    Dem restricted;  // detector ids reuse circuit ids; drops observables
    Dem only;        // c-colored circuit detectors plus virtual detectors
    // Virtual detector ids are num_circuit_detectors + restricted mechanism
    // index.
    int dropped_restricted = 0;  // mechanisms with more than 2 non-c detectors
    int dropped_only = 0;        // mechanisms that fit neither only-branch
};

// Color decomposition of a type-separated DEM: the restricted DEM keeps the
// non-c detectors of every mechanism that has one or two of them; each
// restricted mechanism e doubles as a virtual detector D_e. The "only" DEM
// keeps mechanisms entirely inside color c verbatim and rewrites mixed
// mechanisms with at most one c detector onto {that detector, D_e}.
inline DecomposedDem decompose_dem(const Dem& dem, Color c) {
    DecomposedDem dd;
    dd.color = c;
    dd.num_circuit_detectors = static_cast<int>(dem.detectors.size());
    dd.restricted.detectors = dem.detectors;
    dd.restricted.num_observables = 0;
    dd.only.num_observables = dem.num_observables;

    auto not_c = [&](int d) { return dem.detectors[d].color != c; };

    // Restricted mechanisms, merged by detector set.
    std::map<std::vector<int>, int> restricted_index;
    for (const Mechanism& m : dem.mechanisms) {
        std::vector<int> dnc;
        for (int d : m.detectors)
            if (not_c(d)) dnc.push_back(d);
        if (dnc.empty()) continue;
        if (dnc.size() > 2) {
            ++dd.dropped_restricted;
            continue;
        }
        auto [it, inserted] =
            restricted_index.try_emplace(dnc, static_cast<int>(dd.restricted.mechanisms.size()));
        if (inserted) {
            dd.restricted.mechanisms.push_back({m.q, dnc, {}});
        } else {
            double& q = dd.restricted.mechanisms[it->second].q;
            q = combine_flip_probability(q, m.q);
        }
    }

    // Virtual detector table (appended to circuit detector metadata).
    dd.only.detectors = dem.detectors;
    for (size_t e = 0; e < dd.restricted.mechanisms.size(); ++e) {
        DetectorMeta meta;
        meta.is_virtual = true;
        meta.color = c;
        meta.source_mechanism = static_cast<int>(e);
        meta.type = dem.detectors[dd.restricted.mechanisms[e].detectors[0]].type;
        dd.only.detectors.push_back(meta);
    }

    for (const Mechanism& m : dem.mechanisms) {
        std::vector<int> dc, dnc;
        for (int d : m.detectors) (not_c(d) ? dnc : dc).push_back(d);
        if (dnc.empty()) {
            if (m.detectors.size() <= 2) {
                dd.only.mechanisms.push_back(m);
            } else {
                ++dd.dropped_only;
            }
            continue;
        }
        if (dnc.size() <= 2 && dc.size() <= 1) {
            auto it = restricted_index.find(dnc);
            Mechanism rewritten;
            rewritten.q = m.q;
            rewritten.detectors = dc;
            rewritten.detectors.push_back(dd.num_circuit_detectors + it->second);
            std::sort(rewritten.detectors.begin(), rewritten.detectors.end());
            rewritten.observables = m.observables;
            dd.only.mechanisms.push_back(std::move(rewritten));
        } else {
            ++dd.dropped_only;
        }
    }
    dd.only = compress_dem(dd.only);
    return dd;
}

// ---- Text format ----------------------------------------------------------
//
//   detector D<i> face=<f> pauli=<Z|X> round=<t> color=<R|G|B>
//   detector D<i> virtual color=<c> src=<restricted mechanism>
//   error(<q>) D<i> D<j> L<k>
//
// Probabilities carry 17 significant digits so a round trip is bit exact.

inline std::string serialize_dem(const Dem& dem) {
    std::ostringstream os;
    for (size_t i = 0; i < dem.detectors.size(); ++i) {
        const DetectorMeta& d = dem.detectors[i];
        if (d.is_virtual) {
            os << "detector D" << i << " virtual pauli=" << (d.type == PauliType::kZ ? 'Z' : 'X')
               << " color=" << color_name(d.color) << " src=" << d.source_mechanism << "\n";
        } else {
            os << "detector D" << i << " face=" << d.face
               << " pauli=" << (d.type == PauliType::kZ ? 'Z' : 'X') << " round=" << d.round
               << " color=" << color_name(d.color) << "\n";
        }
    }
    char buf[64];
    for (const Mechanism& m : dem.mechanisms) {
        std::snprintf(buf, sizeof buf, "error(%.17g)", m.q);
        os << buf;
        for (int d : m.detectors) os << " D" << d;
        for (int o : m.observables) os << " L" << o;
        os << "\n";
    }
    return os.str();
}

inline Dem parse_dem(const std::string& text) {
    Dem dem;
    dem.num_observables = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::istringstream ls(line.substr(start));
        std::string head;
        ls >> head;
        if (head == "detector") {
            std::string dtok;
            ls >> dtok;
            if (dtok.size() < 2 || dtok[0] != 'D') throw std::invalid_argument("bad detector id");
            size_t id = std::stoul(dtok.substr(1));
            if (dem.detectors.size() != id)
                throw std::invalid_argument("detector ids must be consecutive");
            DetectorMeta meta;
            std::string kv;
            while (ls >> kv) {
                if (kv == "virtual") {
                    meta.is_virtual = true;
                    continue;
                }
                size_t eq = kv.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("bad detector field: " + kv);
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "face") meta.face = std::stoi(val);
                else if (key == "round") meta.round = std::stoi(val);
                else if (key == "src") meta.source_mechanism = std::stoi(val);
                else if (key == "pauli") meta.type = (val == "X") ? PauliType::kX : PauliType::kZ;
                else if (key == "color") {
                    if (val == "R") meta.color = Color::kRed;
                    else if (val == "G") meta.color = Color::kGreen;
                    else if (val == "B") meta.color = Color::kBlue;
                    else throw std::invalid_argument("bad color: " + val);
                } else {
                    throw std::invalid_argument("unknown detector field: " + key);
                }
            }
            dem.detectors.push_back(meta);
        } else if (head.rfind("error(", 0) == 0) {
            size_t close = head.find(')');
            if (close == std::string::npos) throw std::invalid_argument("bad error line");
            Mechanism m;
            m.q = std::stod(head.substr(6, close - 6));
            std::string tok;
            while (ls >> tok) {
                if (tok[0] == 'D') m.detectors.push_back(std::stoi(tok.substr(1)));
                else if (tok[0] == 'L') m.observables.push_back(std::stoi(tok.substr(1)));
                else throw std::invalid_argument("bad error target: " + tok);
            }
            std::sort(m.detectors.begin(), m.detectors.end());
            std::sort(m.observables.begin(), m.observables.end());
            for (int o : m.observables) dem.num_observables = std::max(dem.num_observables, o + 1);
            dem.mechanisms.push_back(std::move(m));
        } else {
            throw std::invalid_argument("unknown line: " + line);
        }
    }
    return dem;
}

}  // namespace ccdec

#endif
