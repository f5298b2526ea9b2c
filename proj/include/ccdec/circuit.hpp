#ifndef CCDEC_CIRCUIT_HPP
#define CCDEC_CIRCUIT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccdec/lattice.hpp"
#include "ccdec/tableau.hpp"

namespace ccdec {

enum class PauliType : int { kZ = 0, kX = 1 };

// CNOT time slots for one extraction round: entries 0..5 drive the Z-check
// ancilla from the six hexagon corners (left, below-left, below-right, right,
// above-right, above-left), entries 6..11 the X-check ancilla in the same
// corner order. Values are 1-based slot numbers; the round length is the
// largest value and every slot 1..length must be used by someone.
struct CnotSchedule {
    std::array<int, 12> slot{};

    int length() const { return *std::max_element(slot.begin(), slot.end()); }

    CnotSchedule swapped() const {
        CnotSchedule s;
        for (int i = 0; i < 6; ++i) {
            s.slot[i] = slot[6 + i];
            s.slot[6 + i] = slot[i];
        }
        return s;
    }

    std::string str() const {
        std::ostringstream os;
        for (int i = 0; i < 12; ++i) {
            if (i == 6)
                os << ';';
            else if (i)
                os << ',';
            os << slot[i];
        }
        return os.str();
    }

    static CnotSchedule parse(const std::string& text) {
        CnotSchedule s;
        std::string t = text;
        std::replace(t.begin(), t.end(), ';', ',');
        std::istringstream is(t);
        std::string tok;
        int i = 0;
        while (std::getline(is, tok, ',')) {
            if (i >= 12) throw std::invalid_argument("schedule has more than 12 entries");
            s.slot[i++] = std::stoi(tok);
        }
        if (i != 12) throw std::invalid_argument("schedule needs 12 entries");
        return s;
    }

    bool operator==(const CnotSchedule&) const = default;
    bool operator<(const CnotSchedule& o) const { return slot < o.slot; }
};

enum class OpType : int { kPrepZ, kPrepX, kCnot, kMeasZ, kMeasX, kIdle };

struct Operation {
    OpType type = OpType::kIdle;
    int q0 = -1;
    int q1 = -1;          // CNOT target
    int meas_index = -1;  // measurement record slot
};

struct TimeSlice {
    std::vector<Operation> ops;
};

struct DetectorDef {
    int id = -1;
    PauliType type = PauliType::kZ;
    int face = -1;
    int round = -1;  // 1-based comparison round
    Color color = Color::kRed;
    std::vector<int> measurements;
};

// A Z-basis memory experiment: data prepared in |0>, `rounds` extraction
// rounds, transversal Z readout. Qubit layout: data qubits keep their lattice
// ids; face f gets a Z ancilla and an X ancilla after them.
struct MemoryCircuit {
    int distance = 0;
    int rounds = 0;
    CnotSchedule schedule;
    ColorLattice lattice;
    int num_data = 0;
    int num_qubits = 0;
    std::vector<int> z_anc, x_anc;  // per face
    std::vector<TimeSlice> slices;
    int num_measurements = 0;
    std::vector<DetectorDef> detectors;
    std::vector<int> observable;  // measurement indices of the red boundary readout
};

class ScheduleConflictError : public std::invalid_argument {
  public:
    explicit ScheduleConflictError(const std::string& what) : std::invalid_argument(what) {}
};

inline MemoryCircuit build_memory_circuit(const ColorLattice& lat, const CnotSchedule& sched,
                                          int rounds) {
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    for (int v : sched.slot)
        if (v < 1) throw std::invalid_argument("schedule slots are 1-based");
    {
        std::set<int> used(sched.slot.begin(), sched.slot.end());
        for (int s = 1; s <= sched.length(); ++s)
            if (!used.count(s))
                throw std::invalid_argument("schedule skips slot " + std::to_string(s));
    }

    MemoryCircuit c;
    c.distance = lat.distance;
    c.rounds = rounds;
    c.schedule = sched;
    c.lattice = lat;
    c.num_data = static_cast<int>(lat.vertices.size());
    c.z_anc.resize(lat.faces.size());
    c.x_anc.resize(lat.faces.size());
    for (const LatticeFace& f : lat.faces) {
        c.z_anc[f.id] = c.num_data + 2 * f.id;
        c.x_anc[f.id] = c.num_data + 2 * f.id + 1;
    }
    c.num_qubits = c.num_data + 2 * static_cast<int>(lat.faces.size());

    auto finish_slice = [&](TimeSlice& ts) {
        std::vector<uint8_t> busy(c.num_qubits, 0);
        for (const Operation& op : ts.ops) {
            busy[op.q0] = 1;
            if (op.q1 >= 0) busy[op.q1] = 1;
        }
        for (int q = 0; q < c.num_qubits; ++q)
            if (!busy[q]) ts.ops.push_back({OpType::kIdle, q, -1, -1});
        c.slices.push_back(std::move(ts));
    };
    auto add_meas = [&](TimeSlice& ts, OpType type, int q) {
        ts.ops.push_back({type, q, -1, c.num_measurements});
        return c.num_measurements++;
    };

    // Data preparation.
    {
        TimeSlice ts;
        for (int q = 0; q < c.num_data; ++q) ts.ops.push_back({OpType::kPrepZ, q, -1, -1});
        finish_slice(ts);
    }

    int L = sched.length();
    std::vector<std::vector<int>> z_meas(lat.faces.size()), x_meas(lat.faces.size());
    for (int t = 1; t <= rounds; ++t) {
        TimeSlice prep;
        for (const LatticeFace& f : lat.faces) {
            prep.ops.push_back({OpType::kPrepZ, c.z_anc[f.id], -1, -1});
            prep.ops.push_back({OpType::kPrepX, c.x_anc[f.id], -1, -1});
        }
        finish_slice(prep);

        std::vector<TimeSlice> cnots(L);
        std::vector<std::map<int, std::string>> owner(L);
        auto place = [&](int s, int ctrl, int tgt, const std::string& what) {
            for (int q : {ctrl, tgt}) {
                auto [it, ok] = owner[s - 1].try_emplace(q, what);
                if (!ok)
                    throw ScheduleConflictError("slot " + std::to_string(s) + ": qubit " +
                                                std::to_string(q) + " used by " + it->second +
                                                " and " + what);
            }
            cnots[s - 1].ops.push_back({OpType::kCnot, ctrl, tgt, -1});
        };
        for (const LatticeFace& f : lat.faces)
            for (int corner = 0; corner < 6; ++corner) {
                int v = f.corner_slots[corner];
                if (v < 0) continue;
                place(sched.slot[corner], v, c.z_anc[f.id],
                      "Z-check of face " + std::to_string(f.id));
                place(sched.slot[6 + corner], c.x_anc[f.id], v,
                      "X-check of face " + std::to_string(f.id));
            }
        for (TimeSlice& ts : cnots) finish_slice(ts);

        TimeSlice meas;
        for (const LatticeFace& f : lat.faces) {
            z_meas[f.id].push_back(add_meas(meas, OpType::kMeasZ, c.z_anc[f.id]));
            x_meas[f.id].push_back(add_meas(meas, OpType::kMeasX, c.x_anc[f.id]));
        }
        finish_slice(meas);
    }

    // Transversal data readout.
    std::vector<int> data_meas(c.num_data);
    {
        TimeSlice ts;
        for (int q = 0; q < c.num_data; ++q) data_meas[q] = add_meas(ts, OpType::kMeasZ, q);
        finish_slice(ts);
    }

    // Z detectors: first round absolute, then consecutive comparisons, then
    // the data readout closes out the last round. X detectors: consecutive
    // comparisons only.
    auto add_detector = [&](PauliType type, int face, int round, std::vector<int> meas) {
        DetectorDef d;
        d.id = static_cast<int>(c.detectors.size());
        d.type = type;
        d.face = face;
        d.round = round;
        d.color = lat.faces[face].color;
        d.measurements = std::move(meas);
        c.detectors.push_back(std::move(d));
    };
    for (int t = 1; t <= rounds + 1; ++t)
        for (const LatticeFace& f : lat.faces) {
            if (t == 1) {
                add_detector(PauliType::kZ, f.id, t, {z_meas[f.id][0]});
            } else if (t <= rounds) {
                add_detector(PauliType::kZ, f.id, t, {z_meas[f.id][t - 2], z_meas[f.id][t - 1]});
            } else {
                std::vector<int> m{z_meas[f.id][rounds - 1]};
                for (int v : f.vertices) m.push_back(data_meas[v]);
                add_detector(PauliType::kZ, f.id, t, std::move(m));
            }
        }
    for (int t = 2; t <= rounds; ++t)
        for (const LatticeFace& f : lat.faces)
            add_detector(PauliType::kX, f.id, t, {x_meas[f.id][t - 2], x_meas[f.id][t - 1]});

    for (int v : logical_support(lat, Color::kRed)) c.observable.push_back(data_meas[v]);
    return c;
}

// Noiseless run through the symbolic tableau; returns one SymBits expression
// per measurement record.
inline std::vector<SymBits> simulate_noiseless(const MemoryCircuit& c) {
    SymTableau tab(c.num_qubits);
    std::vector<SymBits> meas(c.num_measurements);
    for (const TimeSlice& ts : c.slices)
        for (const Operation& op : ts.ops) switch (op.type) {
                case OpType::kPrepZ: tab.reset_z(op.q0); break;
                case OpType::kPrepX: tab.reset_x(op.q0); break;
                case OpType::kCnot: tab.cnot(op.q0, op.q1); break;
                case OpType::kMeasZ: meas[op.meas_index] = tab.measure_z(op.q0); break;
                case OpType::kMeasX: meas[op.meas_index] = tab.measure_x(op.q0); break;
                case OpType::kIdle: break;
            }
    return meas;
}

struct ScheduleReport {
    bool valid = false;
    std::string diagnostics;
};

// A schedule is valid when (structurally well formed and) no qubit is touched
// twice in a slot and every detector of the noiseless circuit is
// deterministically +1. Checked at distance 5, the smallest patch containing
// every bulk constraint, with enough rounds for both detector types.
inline ScheduleReport validate_schedule(const CnotSchedule& sched, int d = 5) {
    ScheduleReport rep;
    static const ColorLattice lat5 = build_triangular(5);
    ColorLattice scratch;
    const ColorLattice* lat = &lat5;
    if (d != 5) {
        scratch = build_triangular(d);
        lat = &scratch;
    }
    MemoryCircuit c;
    try {
        c = build_memory_circuit(*lat, sched, 2);
    } catch (const std::invalid_argument& e) {
        rep.diagnostics = e.what();
        return rep;
    }
    std::vector<SymBits> meas = simulate_noiseless(c);
    for (const DetectorDef& det : c.detectors) {
        SymBits v;
        for (int m : det.measurements) v.xor_with(meas[m]);
        if (!v.is_constant()) {
            rep.diagnostics = "detector " + std::to_string(det.id) + " (face " +
                              std::to_string(det.face) + ", round " + std::to_string(det.round) +
                              ") is not deterministic";
            return rep;
        }
        if (v.constant) {
            rep.diagnostics = "detector " + std::to_string(det.id) + " is deterministically -1";
            return rep;
        }
    }
    rep.valid = true;
    return rep;
}

// All valid schedules of the given round length, in lexicographic order.
// Candidate pairs are prefiltered with conditions that bulk faces and
// vertices force (each half injective, matching corner-parity classes
// disjoint across halves), then validated in full.
inline std::vector<CnotSchedule> enumerate_schedules(int length) {
    if (length < 6 || length > 12) throw std::invalid_argument("length must be in 6..12");
    std::vector<std::array<int, 6>> halves;
    std::array<int, 6> pick{};
    // All injective assignments of 6 distinct values from 1..length.
    auto rec = [&](auto&& self, int pos, int used_mask) -> void {
        if (pos == 6) {
            halves.push_back(pick);
            return;
        }
        for (int v = 1; v <= length; ++v)
            if (!(used_mask >> v & 1)) {
                pick[pos] = v;
                self(self, pos + 1, used_mask | (1 << v));
            }
    };
    rec(rec, 0, 0);

    auto mask_of = [](const std::array<int, 6>& h, int parity) {
        int m = 0;
        for (int i = parity; i < 6; i += 2) m |= 1 << h[i];
        return m;
    };
    std::vector<int> even_mask(halves.size()), odd_mask(halves.size()), full_mask(halves.size());
    for (size_t i = 0; i < halves.size(); ++i) {
        even_mask[i] = mask_of(halves[i], 0);
        odd_mask[i] = mask_of(halves[i], 1);
        full_mask[i] = even_mask[i] | odd_mask[i];
    }

    int all = ((1 << length) - 1) << 1;
    std::vector<CnotSchedule> out;
    for (size_t zi = 0; zi < halves.size(); ++zi)
        for (size_t xi = 0; xi < halves.size(); ++xi) {
            if (even_mask[zi] & even_mask[xi]) continue;
            if (odd_mask[zi] & odd_mask[xi]) continue;
            if ((full_mask[zi] | full_mask[xi]) != all) continue;
            CnotSchedule s;
            for (int k = 0; k < 6; ++k) {
                s.slot[k] = halves[zi][k];
                s.slot[6 + k] = halves[xi][k];
            }
            // A distance-3 check first: far cheaper and rejects almost every
            // survivor before the full distance-5 validation.
            if (validate_schedule(s, 3).valid && validate_schedule(s, 5).valid) out.push_back(s);
        }
    std::sort(out.begin(), out.end());
    return out;
}

// Lattice symmetries act on schedules by permuting hexagon corners the same
/// way in both halves: the 120-degree rotation maps corner slot i to i+2
// (mod 6), the x-mirror swaps left/right. Returns the lexicographically
// smallest representative of each orbit.
inline std::vector<CnotSchedule> reduce_by_symmetry(const std::vector<CnotSchedule>& all,
                                                    bool with_reflection = false) {
    auto permute = [](const CnotSchedule& s, const std::array<int, 6>& perm) {
        CnotSchedule r;
        for (int i = 0; i < 6; ++i) {
            r.slot[perm[i]] = s.slot[i];
            r.slot[6 + perm[i]] = s.slot[6 + i];
        }
        return r;
    };
    static constexpr std::array<int, 6> kRot = {2, 3, 4, 5, 0, 1};
    static constexpr std::array<int, 6> kMirror = {3, 2, 1, 0, 5, 4};

    std::set<CnotSchedule> kept;
    std::set<CnotSchedule> pool(all.begin(), all.end());
    for (const CnotSchedule& s : all) {
        std::vector<CnotSchedule> orbit{s};
        orbit.push_back(permute(s, kRot));
        orbit.push_back(permute(orbit[1], kRot));
        if (with_reflection) {
            size_t base = orbit.size();
            for (size_t i = 0; i < base; ++i) orbit.push_back(permute(orbit[i], kMirror));
        }
        CnotSchedule rep = *std::min_element(orbit.begin(), orbit.end());
        kept.insert(rep);
    }
    return {kept.begin(), kept.end()};
}

}  // namespace ccdec

#endif
