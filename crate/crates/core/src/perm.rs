//! Permutations of `{0, .., n-1}` and the normalized Hamming metric.
//!
//! Composition follows the left-action convention: `compose(a, b)` maps `i`
//! to `a(b(i))`. The distance between permutations of different degrees
//! compares them on the common prefix and divides by the larger degree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 1 << 16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_DEGREE, "degree {n} out of range");
        Permutation { images: (0..n).map(|i| i as u16).collect() }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("degree {n} out of range 1..={MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u16).collect() })
    }

    pub(crate) fn from_u16_unchecked(images: Vec<u16>) -> Self {
        debug_assert!(Self::from_images(images.iter().map(|&x| x as usize).collect()).is_ok());
        Permutation { images }
    }

    /// The transposition swapping `a` and `b` in `Sym(n)`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    /// The cycle `0 -> 1 -> .. -> n-1 -> 0`.
    pub fn long_cycle(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| ((i + 1) % n) as u16).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x as usize).count()
    }

    /// `a.compose(b)` is `i -> a(b(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&j| self.images[j as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Result<Permutation> {
        Ok(g.inverse().compose(self)?.compose_unchecked(g))
    }

    /// Number of points `i < min(n, N)` with `self(i) = other(i)`.
    pub fn agreements(&self, other: &Permutation) -> usize {
        self.images.iter().zip(&other.images).filter(|(a, b)| a == b).count()
    }

    /// Exact normalized Hamming distance with errors.
    pub fn hamming_exact(&self, other: &Permutation) -> Rational {
        let big = self.degree().max(other.degree());
        Rational::new((big - self.agreements(other)) as i128, big as i128)
    }

    /// Distance to the identity of the same degree.
    pub fn norm_exact(&self) -> Rational {
        Rational::new((self.degree() - self.fixed_points()) as i128, self.degree() as i128)
    }

    pub fn norm(&self) -> f64 {
        (self.degree() - self.fixed_points()) as f64 / self.degree() as f64
    }

    /// Extends to `Sym(big)` by fixing every point `>= n`.
    pub fn embed(&self, big: usize) -> Result<Permutation> {
        if big < self.degree() || big > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "cannot embed degree {} into degree {big}",
                self.degree()
            )));
        }
        let mut images = self.images.clone();
        images.extend((self.degree()..big).map(|i| i as u16));
        Ok(Permutation { images })
    }

    /// Cycles of length at least two, in order of their least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Parses one-based cycle notation such as `(1 2)(3 4 5)` or `id[4]`.
    ///
    /// Cycle notation has no explicit degree, so the degree is `n` and every
    /// point must be at most `n`.
    pub fn parse_with_degree(s: &str, n: usize) -> Result<Permutation> {
        let p: Permutation = s.parse()?;
        if p.degree() > n {
            return Err(Error::Parse(format!("{s:?} moves points beyond degree {n}")));
        }
        p.embed(n)
    }

    /// Same text as the `Display` impl.
    pub fn to_cycle_string(&self) -> String {
        self.to_string()
    }
}

/// One-based cycle notation with the degree in brackets: `(1 2)(3 4 5)[6]`.
/// The identity prints as `id[n]`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id[{}]", self.degree());
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        write!(f, "[{}]", self.degree())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `id[n]`, `(1 2)(3 4 5)` and `(1 2)(3 4 5)[n]`. Without a
    /// bracketed degree the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Parse(format!("{s:?}: {msg}"));
        let (body, degree) = match s.rfind('[') {
            Some(pos) => {
                let tail = s[pos..].strip_prefix('[').and_then(|t| t.strip_suffix(']'));
                let n: usize = tail
                    .ok_or_else(|| bad("unterminated degree"))?
                    .trim()
                    .parse()
                    .map_err(|_| bad("degree is not an integer"))?;
                (s[..pos].trim(), Some(n))
            }
            None => (s, None),
        };
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        if body != "id" && !body.is_empty() {
            let mut rest = body;
            while !rest.is_empty() {
                let open = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let close = open.find(')').ok_or_else(|| bad("missing ')'"))?;
                let pts = open[..close]
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad("point is not an integer")))
                    .collect::<Result<Vec<_>>>()?;
                if pts.iter().any(|&p| p == 0) {
                    return Err(bad("points are one-based"));
                }
                cycles.push(pts.into_iter().map(|p| p - 1).collect());
                rest = open[close + 1..].trim_start();
            }
        } else if degree.is_none() {
            return Err(bad("identity needs a degree, as in id[3]"));
        }
        let max_pt = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(1);
        let n = degree.unwrap_or(max_pt);
        if n < max_pt || n == 0 || n > MAX_DEGREE {
            return Err(bad("degree smaller than a mentioned point"));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in &cycles {
            for (k, &p) in c.iter().enumerate() {
                if touched[p] {
                    return Err(bad("cycles are not disjoint"));
                }
                touched[p] = true;
                images[p] = c[(k + 1) % c.len()];
            }
        }
        Permutation::from_images(images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Normalized Hamming distance with errors as a float.
pub fn hamming_distance(s: &Permutation, t: &Permutation) -> f64 {
    let big = s.degree().max(t.degree());
    (big - s.agreements(t)) as f64 / big as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn group_laws() {
        let a = p("(1 2 3)[4]");
        let id = Permutation::identity(4);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(a.inverse(), p("(1 3 2)[4]"));
        let t = p("(1 2)");
        assert!(t.compose(&t).unwrap().is_identity());
        assert!(a.compose(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn compose_is_left_action() {
        // (a b)(i) = a(b(i))
        let a = p("(1 2)[3]");
        let b = p("(2 3)[3]");
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.apply(1), a.apply(b.apply(1)));
        assert_eq!(ab, p("(1 2 3)"));
    }

    #[test]
    fn hamming_examples() {
        let id2 = Permutation::identity(2);
        let id4 = Permutation::identity(4);
        assert_eq!(hamming_distance(&id2, &id2), 0.0);
        assert_eq!(hamming_distance(&id2, &id4), 0.5);
        assert_eq!(hamming_distance(&id4, &id2), 0.5);
        assert_eq!(hamming_distance(&p("(1 2)"), &id2), 1.0);
        for n in 2..8 {
            assert_eq!(Permutation::long_cycle(n).norm_exact(), Rational::from_integer(1));
        }
    }

    #[test]
    fn embed_dilutes_norm() {
        let t = p("(1 2)");
        let e = t.embed(4).unwrap();
        assert_eq!(e.norm_exact(), Rational::new(1, 2));
        assert_eq!(Permutation::identity(2).embed(5).unwrap(), Permutation::identity(5));
        assert_eq!(t.embed(2).unwrap(), t);
        assert!(t.embed(1).is_err());
    }

    #[test]
    fn cycle_notation_round_trip() {
        for s in ["id[3]", "(1 2)(3 4 5)[6]", "(1 3 2)[3]"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("(1 2)").degree(), 2);
        assert!("(1 2)(2 3)".parse::<Permutation>().is_err());
        assert!("(0 1)".parse::<Permutation>().is_err());
        assert!("id".parse::<Permutation>().is_err());
        assert_eq!(Permutation::parse_with_degree("(1 2)", 3).unwrap(), p("(1 2)[3]"));
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![]).is_err());
        assert!(Permutation::from_images(vec![1, 2, 0]).is_ok());
    }
}
