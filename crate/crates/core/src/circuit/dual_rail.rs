use crate::error::{Error, Result};
use crate::logic::{width_mask, BitWord, TruthTable, MAX_WIDTH};

/// A reversible `n`-bit function and its `2n`-bit dual-rail embedding.
///
/// The embedded word is `(x, y)` with `x` on lines `0..n` (true rail) and
/// `y` on lines `n..2n` (complement rail). Codewords are the words with
/// `y = !x`; on them the embedding computes `(f(x), !f(x))`, so every
/// codeword has weight `n` on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRailFunction {
    base: TruthTable,
    embedded: TruthTable,
}

/// Embeds a reversible function in `2n` lines as
/// `(x, y) -> (f(x), !f(!y))`.
///
/// The second rail applies `f` conjugated by complement, which keeps the
/// map a bijection on the whole `2n`-bit space.
pub fn dual_rail_embed(f: &TruthTable) -> Result<DualRailFunction> {
    if !f.is_reversible() {
        return Err(Error::NotReversible);
    }
    let n = f.in_width();
    if 2 * n > MAX_WIDTH {
        return Err(Error::TooWide {
            width: 2 * n,
            max: MAX_WIDTH,
        });
    }
    let mask = width_mask(n);
    let embedded = TruthTable::from_fn(2 * n, 2 * n, |w| {
        let (x, y) = (w >> n, w & mask);
        let true_rail = f.get(x);
        let complement_rail = !f.get(!y & mask) & mask;
        (true_rail << n) | complement_rail
    })?;
    Ok(DualRailFunction {
        base: f.clone(),
        embedded,
    })
}

impl DualRailFunction {
    pub fn base(&self) -> &TruthTable {
        &self.base
    }

    pub fn embedded(&self) -> &TruthTable {
        &self.embedded
    }

    /// Width of the base function.
    pub fn rail_width(&self) -> usize {
        self.base.in_width()
    }

    pub fn encode(&self, x: BitWord) -> Result<BitWord> {
        if x.width() != self.rail_width() {
            return Err(Error::WidthMismatch {
                expected: self.rail_width(),
                actual: x.width(),
            });
        }
        x.concat(x.complement())
    }

    pub fn is_codeword(&self, w: BitWord) -> bool {
        let n = self.rail_width();
        w.width() == 2 * n && (w.value() >> n) == (!w.value() & width_mask(n))
    }

    /// All `2^n` codewords in true-rail order.
    pub fn codewords(&self) -> impl Iterator<Item = BitWord> + '_ {
        let n = self.rail_width();
        (0..1u32 << n).map(move |x| {
            let x = BitWord::new(n, x).expect("x < 2^n");
            x.concat(x.complement()).expect("2n <= MAX_WIDTH")
        })
    }

    /// True iff every codeword maps to a codeword of equal weight.
    pub fn conserves_codewords(&self) -> bool {
        self.codewords().all(|w| {
            let out = self.embedded.eval(w).expect("codeword width matches");
            self.is_codeword(out) && out.weight() == w.weight()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn identity_embeds_as_identity() {
        let d = dual_rail_embed(&TruthTable::identity(1).unwrap()).unwrap();
        assert_eq!(d.embedded(), &TruthTable::identity(2).unwrap());
        assert_eq!(d.embedded().eval(word("01")).unwrap(), word("01"));
    }

    #[test]
    fn cnot_codeword() {
        let cnot = TruthTable::new(2, 2, vec![0b00, 0b01, 0b11, 0b10]).unwrap();
        let d = dual_rail_embed(&cnot).unwrap();
        let w = d.encode(word("10")).unwrap();
        assert_eq!(w, word("1001"));
        let out = d.embedded().eval(w).unwrap();
        assert_eq!(out, word("1100"));
        assert_eq!((w.weight(), out.weight()), (2, 2));
        assert!(d.embedded().is_reversible());
        assert!(d.conserves_codewords());
    }

    #[test]
    fn rejects_irreversible_and_wide() {
        let bad = TruthTable::new(2, 2, vec![1, 3, 3, 0]).unwrap();
        assert_eq!(dual_rail_embed(&bad), Err(Error::NotReversible));
        let wide = TruthTable::identity(9).unwrap();
        assert!(matches!(dual_rail_embed(&wide), Err(Error::TooWide { .. })));
    }

    #[test]
    fn codeword_predicate() {
        let d = dual_rail_embed(&TruthTable::identity(2).unwrap()).unwrap();
        assert!(d.is_codeword(word("1001")));
        assert!(!d.is_codeword(word("1000")));
        assert!(!d.is_codeword(word("10")));
        assert_eq!(d.codewords().count(), 4);
    }
}
