//! Packed F2 cochains, identified with `Sym(2)` cochains through
//! `0 <-> id`, `1 <-> (1 2)`.

use std::sync::Arc;

use rand::Rng;

use super::{Cochain0, Cochain1, Cochain2};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::f2::BitVec;
use crate::perm::Permutation;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Cochain {
    complex: Arc<Complex>,
    dim: usize,
    bits: BitVec,
}

fn cell_count(x: &Complex, dim: usize) -> usize {
    match dim {
        0 => x.n_vertices(),
        1 => x.n_edges(),
        2 => x.n_polygons(),
        _ => panic!("no cells in dimension {dim}"),
    }
}

fn to_bit(p: &Permutation) -> Result<bool> {
    if p.degree() != 2 {
        return Err(Error::DegreeMismatch(2, p.degree()));
    }
    Ok(!p.is_identity())
}

fn to_perm(b: bool) -> Permutation {
    if b { Permutation::transposition(2, 0, 1) } else { Permutation::identity(2) }
}

impl F2Cochain {
    pub fn zero(complex: Arc<Complex>, dim: usize) -> Self {
        let bits = BitVec::zeros(cell_count(&complex, dim));
        F2Cochain { complex, dim, bits }
    }

    pub fn from_bits(complex: Arc<Complex>, dim: usize, bits: &[bool]) -> Result<Self> {
        let mut c = Self::zero(complex, dim);
        if bits.len() != c.bits.len() {
            return Err(Error::InvalidArgument(format!("expected {} bits, got {}", c.bits.len(), bits.len())));
        }
        for (i, &b) in bits.iter().enumerate() {
            c.bits.set(i, b);
        }
        Ok(c)
    }

    pub fn random(complex: Arc<Complex>, dim: usize, rng: &mut impl Rng) -> Self {
        let mut c = Self::zero(complex, dim);
        for i in 0..c.bits.len() {
            c.bits.set(i, rng.random_bool(0.5));
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn words(&self) -> &[u64] {
        self.bits.words()
    }

    /// Coboundary. In dimension 1 a polygon's value is the parity of how
    /// often its perimeter crosses cochain-supported edges.
    pub fn delta(&self) -> F2Cochain {
        let x = &self.complex;
        let mut out = F2Cochain::zero(x.clone(), self.dim + 1);
        match self.dim {
            0 => {
                for (i, e) in x.edges().iter().enumerate() {
                    out.bits.set(i, self.bits.get(e.src.0) ^ self.bits.get(e.dst.0));
                }
            }
            1 => {
                for (p, per) in x.perimeters().iter().enumerate() {
                    let parity = per.iter().fold(false, |acc, o| acc ^ self.bits.get(o.edge.0));
                    out.bits.set(p, parity);
                }
            }
            _ => panic!("no coboundary out of dimension {}", self.dim),
        }
        out
    }

    pub fn norm_exact(&self) -> Rational {
        let m = self.complex.measures().get(self.dim);
        if m.total() == 0 {
            return Rational::from_integer(0);
        }
        let num: u128 = self.bits.ones().map(|i| m.weights()[i] as u128).sum();
        Rational::new(num as i128, m.total() as i128)
    }

    pub fn add(&self, other: &F2Cochain) -> Result<F2Cochain> {
        if self.dim != other.dim || (!Arc::ptr_eq(&self.complex, &other.complex) && *self.complex != *other.complex) {
            return Err(Error::ComplexMismatch);
        }
        let mut out = self.clone();
        for i in other.bits.ones() {
            out.bits.flip(i);
        }
        Ok(out)
    }

    pub fn distance_exact(&self, other: &F2Cochain) -> Result<Rational> {
        Ok(self.add(other)?.norm_exact())
    }

    pub fn is_cocycle(&self) -> bool {
        self.delta().is_zero()
    }

    pub fn from_sym0(c: &Cochain0) -> Result<Self> {
        Self::from_perms(c.complex().clone(), 0, c.values())
    }

    pub fn from_sym1(c: &Cochain1) -> Result<Self> {
        Self::from_perms(c.complex().clone(), 1, c.values())
    }

    pub fn from_sym2(c: &Cochain2) -> Result<Self> {
        Self::from_perms(c.complex().clone(), 2, c.values())
    }

    fn from_perms(complex: Arc<Complex>, dim: usize, values: &[Permutation]) -> Result<Self> {
        let bits = values.iter().map(to_bit).collect::<Result<Vec<_>>>()?;
        Self::from_bits(complex, dim, &bits)
    }

    pub fn to_perms(&self) -> Vec<Permutation> {
        (0..self.bits.len()).map(|i| to_perm(self.bits.get(i))).collect()
    }

    pub fn to_sym1(&self) -> Result<Cochain1> {
        if self.dim != 1 {
            return Err(Error::InvalidArgument("not a 1-cochain".into()));
        }
        Cochain1::with_degree(self.complex.clone(), 2, self.to_perms())
    }

    pub fn to_sym0(&self) -> Result<Cochain0> {
        if self.dim != 0 {
            return Err(Error::InvalidArgument("not a 0-cochain".into()));
        }
        Cochain0::new(self.complex.clone(), self.to_perms())
    }
}
