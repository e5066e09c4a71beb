use std::sync::Arc;

use crate::cochain::Cochain1;
use crate::complex::{
    contracted_complete_presentation, free_product_presentation, presentation_complex, Letter, Presentation,
};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::Rational;

/// A Sym(2) cochain on `<S', S'' | R', R''>` with `R''` the contracted
/// complete presentation on `d` vertices, and its certified ratio.
#[derive(Clone, Debug)]
pub struct SmallCheegerWitness {
    pub d: usize,
    /// Generators in the base block.
    pub base_generators: usize,
    pub witness: Cochain1,
    pub defect: Rational,
    /// `d(witness, Z^1)`, certified equal to `||witness||`.
    pub distance: Rational,
    /// `defect / distance`, an upper bound on `h1` of the presentation complex.
    pub ratio: Rational,
    /// `(1 + |S'|) * 12 / (d (d - 1))`.
    pub formula_bound: Rational,
}

impl SmallCheegerWitness {
    pub fn within_formula(&self) -> bool {
        self.ratio <= self.formula_bound
    }
}

/// `base * contracted(d)`.
pub fn small_cheeger_presentation(base: &Presentation, d: usize) -> Result<Presentation> {
    free_product_presentation(base, &contracted_complete_presentation(d)?)
}

/// The size `d` and generator offset of a trailing contracted block, if any.
fn contracted_block(p: &Presentation) -> Option<(usize, usize)> {
    let mut d = 3;
    loop {
        let c = contracted_complete_presentation(d).ok()?;
        if c.generators.len() > p.generators.len() || c.relators.len() > p.relators.len() {
            return None;
        }
        let offset = p.generators.len() - c.generators.len();
        let tail = &p.relators[p.relators.len() - c.relators.len()..];
        let head = &p.relators[..p.relators.len() - c.relators.len()];
        let shifted = c.relators.iter().map(|w| {
            w.iter().map(|l| Letter { generator: l.generator + offset, inverse: l.inverse }).collect::<Vec<_>>()
        });
        if tail.iter().cloned().eq(shifted) && head.iter().flatten().all(|l| l.generator < offset) {
            return Some((d, offset));
        }
        d += 1;
    }
}

/// Generators trivial under every homomorphism: close under "a relator all
/// of whose letters are forced except a single occurrence of `g`".
fn forced_trivial(p: &Presentation) -> Vec<bool> {
    let mut forced = vec![false; p.generators.len()];
    loop {
        let mut changed = false;
        for w in &p.relators {
            let free: Vec<usize> = w.iter().map(|l| l.generator).filter(|&g| !forced[g]).collect();
            if free.len() == 1 {
                forced[free[0]] = true;
                changed = true;
            }
        }
        if !changed {
            return forced;
        }
    }
}

/// The cut witness: `(0 1)` on every `x_{i,j}` with `i <= d/2 < j`, identity
/// elsewhere. Every cocycle is trivial on the contracted block, so the
/// distance to `Z^1` is the witness norm.
pub fn small_cheeger_witness(p: &Presentation) -> Result<SmallCheegerWitness> {
    let (d, offset) = contracted_block(p)
        .ok_or_else(|| Error::Precondition("presentation does not end in a contracted complete block".into()))?;
    let x = Arc::new(presentation_complex(p)?);
    let k = d / 2;
    let swap = Permutation::transposition(2, 0, 1);
    let mut values = vec![Permutation::identity(2); p.generators.len()];
    let mut g = offset;
    for i in 1..=d {
        for j in i + 2..=d {
            if i <= k && k < j {
                values[g] = swap.clone();
            }
            g += 1;
        }
    }
    let forced = forced_trivial(p);
    if values.iter().zip(&forced).any(|(v, &f)| !v.is_identity() && !f) {
        return Err(Error::Precondition("witness support is not forced trivial".into()));
    }
    let witness = Cochain1::new(x, values)?;
    let defect = witness.delta().norm_exact();
    let distance = witness.norm_exact();
    let dd = d as i128;
    Ok(SmallCheegerWitness {
        d,
        base_generators: offset,
        ratio: defect / distance,
        formula_bound: Rational::new((1 + offset as i128) * 12, dd * (dd - 1)),
        witness,
        defect,
        distance,
    })
}
