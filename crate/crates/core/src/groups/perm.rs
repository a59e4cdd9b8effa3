use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Permutation of `{0, ..., n-1}` stored as its image list. Text form is
/// 1-based cycle notation, e.g. `(1 2 3)(4 5)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::contract(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of degree `n` from 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut moved = vec![false; n];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a == 0 || a > n {
                    return Err(Error::contract(format!("point {a} outside 1..={n}")));
                }
                if moved[a - 1] {
                    return Err(Error::contract(format!("point {a} appears in two cycles")));
                }
                moved[a - 1] = true;
                images[a - 1] = (c[(k + 1) % c.len()] - 1) as u32;
            }
        }
        Ok(Perm { images })
    }

    /// `(1 2 ... n)`.
    pub fn cycle(n: usize) -> Self {
        Perm { images: (0..n as u32).map(|i| (i + 1) % n as u32).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `g^{-1} self g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    /// Nontrivial cycles, 0-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut j = self.image(s);
            while j != s {
                seen[j] = true;
                c.push(j);
                j = self.image(j);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// `self` on points `0..n` and `other` on `n..n+m`.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let n = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + n));
        Perm { images }
    }

    /// Parses cycle notation for a permutation of degree `n`.
    pub fn parse(s: &str, n: usize) -> Result<Perm> {
        Perm::from_cycles(n, &parse_cycles(s)?)
    }
}

/// Splits `(1 2 3)(4 5)` into 1-based cycles. `()` and the empty string
/// give the identity.
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let bad = |offset: usize, message: &str| Error::Parse { offset, message: message.to_string() };
    let mut cycles = Vec::new();
    let mut rest = s.char_indices().peekable();
    while let Some((i, c)) = rest.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => {
                let mut body = String::new();
                let mut closed = false;
                for (_, c) in rest.by_ref() {
                    if c == ')' {
                        closed = true;
                        break;
                    }
                    body.push(c);
                }
                if !closed {
                    return Err(bad(i, "unclosed cycle"));
                }
                let pts: Vec<usize> = body
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad(i, &format!("bad point '{t}'"))))
                    .collect::<Result<_>>()?;
                if pts.len() > 1 {
                    cycles.push(pts);
                }
            }
            _ => return Err(bad(i, &format!("unexpected '{c}'"))),
        }
    }
    Ok(cycles)
}

/// Largest point mentioned in cycle notation.
pub fn max_point(s: &str) -> Result<usize> {
    Ok(parse_cycles(s)?.iter().flatten().copied().max().unwrap_or(0))
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Perm> {
        Perm::parse(s, max_point(s)?)
    }
}

impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
