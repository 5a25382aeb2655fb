#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use revkit::{Circuit, Gate, GateKind, TruthTable};

pub const ALL_KINDS: [GateKind; 4] = [
    GateKind::Not,
    GateKind::Cnot,
    GateKind::Toffoli,
    GateKind::Fredkin,
];

/// A gate of `kind` on distinct random lines, or `None` when `width` is too
/// small for it.
pub fn random_gate<R: Rng>(rng: &mut R, width: usize, kind: GateKind) -> Option<Gate> {
    if kind.arity() > width {
        return None;
    }
    let mut lines: Vec<usize> = (0..width).collect();
    lines.shuffle(rng);
    Some(Gate::from_lines(kind, &lines[..kind.arity()]).unwrap())
}

pub fn random_circuit<R: Rng>(
    rng: &mut R,
    width: usize,
    gates: usize,
    kinds: &[GateKind],
) -> Circuit {
    let mut c = Circuit::new(width).unwrap();
    while c.gates().len() < gates {
        let kind = *kinds.choose(rng).unwrap();
        if let Some(g) = random_gate(rng, width, kind) {
            c.push(g).unwrap();
        }
    }
    c
}

pub fn random_permutation<R: Rng>(rng: &mut R, width: usize) -> TruthTable {
    let mut outputs: Vec<u32> = (0..1u32 << width).collect();
    outputs.shuffle(rng);
    TruthTable::new(width, width, outputs).unwrap()
}

pub fn random_table<R: Rng>(rng: &mut R, width: usize) -> TruthTable {
    let outputs = (0..1u32 << width)
        .map(|_| rng.gen_range(0..1u32 << width))
        .collect();
    TruthTable::new(width, width, outputs).unwrap()
}

/// Independent bijectivity oracle: every output word appears exactly once.
pub fn every_word_once(t: &TruthTable) -> bool {
    if t.in_width() != t.out_width() {
        return false;
    }
    let mut counts = vec![0u32; 1 << t.out_width()];
    for &y in t.outputs() {
        counts[y as usize] += 1;
    }
    counts.iter().all(|&c| c == 1)
}

/// Bisection on `g(f) = 0` over `[lo, hi]`, assuming a sign change.
pub fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let glo = g(lo);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    ((actual - expected) / expected).abs()
}
