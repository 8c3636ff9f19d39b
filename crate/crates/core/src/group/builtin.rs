//! Built-in finite groups and the group-spec grammar used by the CLI.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::finite::{FiniteGroup, MAX_ORDER};
use crate::error::{Error, Result};

/// Largest `n` accepted for `symmetric(n)`.
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

/// A named group: a built-in family member, the circle, or a Cayley-table file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Circle,
    File(PathBuf),
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `cyclic:N`, `dihedral:N`, `symmetric:N`, `quaternion8`,
    /// `circle`; anything else is treated as a Cayley-table file path.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let param = |rest: &str| -> Result<usize> {
            rest.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad group parameter in {s:?}")))
        };
        match s.split_once(':') {
            Some(("cyclic", n)) => Ok(GroupSpec::Cyclic(param(n)?)),
            Some(("dihedral", n)) => Ok(GroupSpec::Dihedral(param(n)?)),
            Some(("symmetric", n)) => Ok(GroupSpec::Symmetric(param(n)?)),
            _ => match s {
                "quaternion8" | "Q8" => Ok(GroupSpec::Quaternion8),
                "circle" => Ok(GroupSpec::Circle),
                "" => Err(Error::Parse("empty group spec".into())),
                path => Ok(GroupSpec::File(PathBuf::from(path))),
            },
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Circle => write!(f, "circle"),
            GroupSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// The cyclic group ℤ/n.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::Unsupported(format!("cyclic({n})")));
    }
    let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    FiniteGroup::from_table(format!("Z{n}"), n, table, None)
}

/// The dihedral group of order `2n`; element `r^a s^b` has index `a + n b`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 || 2 * n > MAX_ORDER {
        return Err(Error::Unsupported(format!("dihedral({n})")));
    }
    let order = 2 * n;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (a, b) = (x % n, x / n);
        for y in 0..order {
            let (c, d) = (y % n, y / n);
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            table.push(rot + n * ((b + d) % 2));
        }
    }
    let names = (0..order)
        .map(|x| {
            let (a, b) = (x % n, x / n);
            let r = match a {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r{a}"),
            };
            match (r.is_empty(), b) {
                (true, 0) => "e".to_string(),
                (true, _) => "s".to_string(),
                (false, 0) => r,
                (false, _) => format!("{r}s"),
            }
        })
        .collect();
    FiniteGroup::from_table(format!("D{n}"), order, table, Some(names))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut current: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// Composition `g ∘ h` (apply `h` first).
pub fn compose_permutations(g: &[u8], h: &[u8]) -> Vec<u8> {
    h.iter().map(|&i| g[i as usize]).collect()
}

/// Cycle notation with 1-based points, e.g. `(1 3 2)`; the identity is `e`.
pub fn cycle_notation(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// The symmetric group on `n ≤ 5` points, elements in lexicographic order,
/// with product `(gh)(i) = g(h(i))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::Unsupported(format!("symmetric({n}); supported n is 1..=5")));
    }
    let perms = permutations(n);
    let index: HashMap<&[u8], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let order = perms.len();
    let mut table = Vec::with_capacity(order * order);
    for g in &perms {
        for h in &perms {
            table.push(index[compose_permutations(g, h).as_slice()]);
        }
    }
    let names = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_table(format!("S{n}"), order, table, Some(names))
}

/// Units 1, i, j, k and their negatives; index `unit + 4 * sign`.
pub fn quaternion8() -> Result<FiniteGroup> {
    // (unit, sign) products of the units 1, i, j, k.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let mut table = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (u, s) = UNIT[x % 4][y % 4];
            table.push(u + 4 * ((s + x / 4 + y / 4) % 2));
        }
    }
    let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].map(String::from).to_vec();
    FiniteGroup::from_table("Q8", 8, table, Some(names))
}
