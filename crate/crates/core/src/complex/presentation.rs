use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Complex, ComplexBuilder, EdgeId, MeasureSpec};
use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { inverse: !self.inverse, ..self }
    }
}

/// A finite presentation with weights on generators and relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub generator_weights: Vec<u64>,
    pub relators: Vec<Vec<Letter>>,
    pub relator_weights: Vec<u64>,
}

impl Presentation {
    /// Uniform weights on both generators and relators.
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<Self> {
        let p = Presentation {
            generator_weights: vec![1; generators.len()],
            relator_weights: vec![1; relators.len()],
            generators,
            relators,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generator_weights.len() != self.generators.len()
            || self.relator_weights.len() != self.relators.len()
        {
            return Err(Error::InvalidArgument("weight count does not match".into()));
        }
        for (i, name) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(name) {
                return Err(Error::InvalidArgument(format!("generator {name} listed twice")));
            }
        }
        for (r, word) in self.relators.iter().enumerate() {
            if word.is_empty() {
                return Err(Error::InvalidArgument(format!("relator {r} is empty")));
            }
            let l = word.len();
            for k in 0..l {
                if word[k].generator >= self.generators.len() {
                    return Err(Error::InvalidArgument(format!("relator {r} uses an unknown generator")));
                }
                if l > 1 && word[(k + 1) % l] == word[k].inv() {
                    return Err(Error::InvalidArgument(format!("relator {r} is not cyclically reduced")));
                }
            }
        }
        Ok(())
    }

    pub fn word_to_string(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|l| {
                let g = &self.generators[l.generator];
                if l.inverse { format!("{g}^-1") } else { g.clone() }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `a, b | a b a^-1 b^-1, b^2`. Angle brackets are optional; a letter may
/// carry an integer exponent.
impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['<', '⟨']).trim_end_matches(['>', '⟩']);
        let (gens, rels) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("{s:?}: expected 'generators | relators'")))?;
        let generators: Vec<String> = gens
            .split(',')
            .map(|g| g.trim().to_string())
            .filter(|g| !g.is_empty())
            .collect();
        let lookup = |name: &str| {
            generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))
        };
        let mut relators = Vec::new();
        for rel in rels.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let mut word = Vec::new();
            for tok in rel.split_whitespace() {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => {
                        (n, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?)
                    }
                    None => (tok, 1),
                };
                let g = lookup(name)?;
                for _ in 0..exp.unsigned_abs() {
                    word.push(Letter { generator: g, inverse: exp < 0 });
                }
            }
            relators.push(word);
        }
        Presentation::new(generators, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|w| self.word_to_string(w)).collect();
        write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
    }
}

/// One vertex, a loop per generator and a polygon per relator.
pub fn presentation_complex(p: &Presentation) -> Result<Complex> {
    p.validate()?;
    if p.relators.is_empty() {
        return Err(Error::InvalidArgument("presentation has no relators".into()));
    }
    let mut b = ComplexBuilder::new(1);
    for _ in &p.generators {
        b.edge(0, 0);
    }
    for word in &p.relators {
        b.polygon(word.iter().map(|l| (EdgeId(l.generator), l.inverse)).collect());
    }
    b.build_with([
        MeasureSpec::Uniform,
        MeasureSpec::Weights(p.generator_weights.clone()),
        MeasureSpec::Weights(p.relator_weights.clone()),
    ])
}

/// Name of the generator for the non-tree edge `{i, j}` (one-based, `j >= i + 2`).
pub(crate) fn contracted_name(i: usize, j: usize) -> String {
    format!("x{i}_{j}")
}

/// The complete complex on vertices `1..=d` with the path `1 - 2 - .. - d`
/// contracted: one generator `x{i}_{j}` per edge with `j >= i + 2`, one
/// relator per triangle with its tree edges deleted. It presents the
/// trivial group.
pub fn contracted_complete_presentation(d: usize) -> Result<Presentation> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("contracted presentation needs d >= 3, got {d}")));
    }
    let mut generators = Vec::new();
    let mut index = std::collections::HashMap::new();
    for i in 1..=d {
        for j in i + 2..=d {
            index.insert((i, j), generators.len());
            generators.push(contracted_name(i, j));
        }
    }
    let letter = |i: usize, j: usize, inverse: bool| {
        index.get(&(i, j)).map(|&generator| Letter { generator, inverse })
    };
    let mut relators = Vec::new();
    for i in 1..=d {
        for j in i + 1..=d {
            for k in j + 1..=d {
                let word: Vec<Letter> =
                    [letter(i, j, false), letter(j, k, false), letter(i, k, true)].into_iter().flatten().collect();
                relators.push(word);
            }
        }
    }
    Presentation::new(generators, relators)
}

/// `<S1, S2 | R1, R2>` with uniform weights. Generators of `p2` whose names
/// clash with `p1` get primes appended.
pub fn free_product_presentation(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    let mut generators = p1.generators.clone();
    let offset = generators.len();
    for g in &p2.generators {
        let mut name = g.clone();
        while generators.contains(&name) {
            name.push('\'');
        }
        generators.push(name);
    }
    let mut relators = p1.relators.clone();
    relators.extend(p2.relators.iter().map(|w| {
        w.iter().map(|l| Letter { generator: l.generator + offset, inverse: l.inverse }).collect()
    }));
    Presentation::new(generators, relators)
}
