//! Positive roots of the simple Lie algebra root systems in simple-root
//! coordinates.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::arith::{ivec, IntVector};
use crate::error::{Error, Result};

/// Root system type and rank, for example `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootSystem {
    pub kind: char,
    pub rank: usize,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = chars.next().map(|c| c.to_ascii_uppercase()).ok_or_else(|| Error::UnsupportedRootSystem(s.into()))?;
        let rank: usize = chars.as_str().parse().map_err(|_| Error::UnsupportedRootSystem(s.into()))?;
        let system = RootSystem { kind, rank };
        system.gram()?;
        Ok(system)
    }
}

impl RootSystem {
    /// Symmetric bilinear form on the simple roots.
    fn gram(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank;
        let unsupported = || Error::UnsupportedRootSystem(self.to_string());
        let chain = |diag: Vec<i64>| {
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                g[i][i] = diag[i];
                if i + 1 < n {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
            }
            g
        };
        let g = match self.kind {
            'A' if n >= 1 => chain(vec![2; n]),
            'B' if n >= 2 => {
                let mut d = vec![2; n];
                d[n - 1] = 1;
                chain(d)
            }
            'C' if n >= 2 => {
                let mut d = vec![2; n];
                d[n - 1] = 4;
                let mut g = chain(d);
                g[n - 2][n - 1] = -2;
                g[n - 1][n - 2] = -2;
                g
            }
            'D' if n >= 4 => {
                let mut g = chain(vec![2; n]);
                g[n - 2][n - 1] = 0;
                g[n - 1][n - 2] = 0;
                g[n - 3][n - 1] = -1;
                g[n - 1][n - 3] = -1;
                g
            }
            'G' if n == 2 => vec![vec![2, -3], vec![-3, 6]],
            'F' if n == 4 => vec![vec![4, -2, 0, 0], vec![-2, 4, -2, 0], vec![0, -2, 2, -1], vec![0, 0, -1, 2]],
            _ => return Err(unsupported()),
        };
        Ok(g)
    }

    /// Positive roots, obtained by closing the simple roots under simple
    /// reflections, sorted by degree and then in decreasing lexicographic
    /// order.
    pub fn positive_roots(&self) -> Result<Vec<IntVector>> {
        let g = self.gram()?;
        let n = self.rank;
        let form = |u: &[i64], v: &[i64]| -> i64 {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += u[i] * g[i][j] * v[j];
                }
            }
            s
        };
        let simple: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = 1;
                e
            })
            .collect();
        let mut roots: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut frontier: Vec<Vec<i64>> = simple.clone();
        while let Some(r) = frontier.pop() {
            for (i, s) in simple.iter().enumerate() {
                let c = 2 * form(&r, s) / g[i][i];
                let image: Vec<i64> = r.iter().zip(s).map(|(x, y)| x - c * y).collect();
                if image.iter().all(|&x| x >= 0) && roots.insert(image.clone()) {
                    frontier.push(image);
                }
            }
        }
        let mut out: Vec<Vec<i64>> = roots.into_iter().collect();
        out.sort_by(|a, b| graded_lex_desc(a, b));
        Ok(out.iter().map(|r| ivec(r)).collect())
    }
}

fn graded_lex_desc(a: &[i64], b: &[i64]) -> Ordering {
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| b.cmp(a))
}

/// Positive roots of a named root system such as `"A3"` or `"G2"`.
pub fn root_system(name: &str) -> Result<Vec<IntVector>> {
    name.parse::<RootSystem>()?.positive_roots()
}
