#pragma once

#include "pms/common.hpp"

namespace pms {

/// Single-excitation basis of the composite system. The coherent subspace
/// (modes, cavity photon, excited atom, target atom) occupies the first
/// N+3 slots; the two absorbing sinks complete the N+5 dimensional space.
struct BasisIndex {
    enum class Kind { Mode, CavityPhoton, ExcitedAtom, TargetAtom, SpontSink, CavitySink };

    Kind kind = Kind::Mode;
    int mode = 0;  // mode quantum number n in -(N-1)/2 .. (N-1)/2, valid for Kind::Mode

    static BasisIndex line_mode(int n) { return {Kind::Mode, n}; }
    static BasisIndex cavity_photon() { return {Kind::CavityPhoton, 0}; }
    static BasisIndex excited_atom() { return {Kind::ExcitedAtom, 0}; }
    static BasisIndex target_atom() { return {Kind::TargetAtom, 0}; }
    static BasisIndex spont_sink() { return {Kind::SpontSink, 0}; }
    static BasisIndex cavity_sink() { return {Kind::CavitySink, 0}; }

    int to_index(int n_modes) const {
        const int half = (n_modes - 1) / 2;
        switch (kind) {
            case Kind::Mode:
                require(mode >= -half && mode <= half, "mode number out of range");
                return mode + half;
            case Kind::CavityPhoton: return n_modes;
            case Kind::ExcitedAtom: return n_modes + 1;
            case Kind::TargetAtom: return n_modes + 2;
            case Kind::SpontSink: return n_modes + 3;
            case Kind::CavitySink: return n_modes + 4;
        }
        fail("unreachable");
    }

    static BasisIndex from_index(int idx, int n_modes) {
        require(idx >= 0 && idx < n_modes + 5, "basis index out of range");
        const int half = (n_modes - 1) / 2;
        if (idx < n_modes) return line_mode(idx - half);
        switch (idx - n_modes) {
            case 0: return cavity_photon();
            case 1: return excited_atom();
            case 2: return target_atom();
            case 3: return spont_sink();
            default: return cavity_sink();
        }
    }

    bool operator==(const BasisIndex& o) const { return kind == o.kind && mode == o.mode; }
};

inline int coherent_dimension(int n_modes) { return n_modes + 3; }
inline int basis_dimension(int n_modes) { return n_modes + 5; }

}  // namespace pms
