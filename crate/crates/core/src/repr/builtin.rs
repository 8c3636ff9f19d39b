//! Irrep tables for the built-in groups.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{CMatrix, DualSet, Irrep};
use crate::error::{Error, Result};
use crate::group::builtin::permutations;
use crate::group::{FiniteGroup, GroupSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mat2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

/// The dual for a built-in group, or an error for Cayley-table files.
pub fn builtin_dual(spec: &GroupSpec, group: Arc<FiniteGroup>) -> Result<DualSet> {
    match *spec {
        GroupSpec::Cyclic(n) => cyclic_dual(group, n),
        GroupSpec::Dihedral(n) => dihedral_dual(group, n),
        GroupSpec::Symmetric(n) => symmetric_dual(group, n),
        GroupSpec::Quaternion8 => quaternion_dual(group),
        GroupSpec::Circle => Err(Error::Unsupported("the circle dual is a frequency window".into())),
        GroupSpec::File(_) => Err(Error::Unsupported("groups loaded from a Cayley table need a dual file".into())),
    }
}

fn check_order(group: &FiniteGroup, order: usize) -> Result<()> {
    if group.order() != order {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// Characters `χ_j(x) = e^{2πijx/n}` of ℤ/n.
pub fn cyclic_dual(group: Arc<FiniteGroup>, n: usize) -> Result<DualSet> {
    check_order(&group, n)?;
    let irreps = (0..n)
        .map(|j| {
            let label = if j == 0 { "trivial".to_string() } else { format!("chi{j}") };
            Irrep::character(label, (0..n).map(|x| Complex64::from_polar(1.0, 2.0 * PI * (j * x % n) as f64 / n as f64)))
        })
        .collect::<Result<Vec<_>>>()?;
    DualSet::new(group, irreps)
}

/// One-dimensional characters plus the rotation family `ρ_h(r^a s^b) = R(2πha/n) F^b`.
pub fn dihedral_dual(group: Arc<FiniteGroup>, n: usize) -> Result<DualSet> {
    check_order(&group, 2 * n)?;
    let split = |x: usize| (x % n, x / n);
    let sign = |e: usize| if e % 2 == 0 { 1.0 } else { -1.0 };
    let order = 2 * n;
    let mut irreps = vec![Irrep::trivial(order)];
    irreps.push(Irrep::character("sign(s)", (0..order).map(|x| c(sign(split(x).1), 0.0)))?);
    if n % 2 == 0 {
        irreps.push(Irrep::character("(-1)^a", (0..order).map(|x| c(sign(split(x).0), 0.0)))?);
        irreps.push(Irrep::character("(-1)^(a+b)", (0..order).map(|x| {
            let (a, b) = split(x);
            c(sign(a + b), 0.0)
        }))?);
    }
    for h in 1..=(n - 1) / 2 {
        let matrices = (0..order)
            .map(|x| {
                let (a, b) = split(x);
                let t = 2.0 * PI * (h * a % n) as f64 / n as f64;
                let (s, co) = t.sin_cos();
                let f = sign(b);
                mat2(c(co, 0.0), c(-s * f, 0.0), c(s, 0.0), c(co * f, 0.0))
            })
            .collect();
        irreps.push(Irrep::new(format!("rho{h}"), matrices)?);
    }
    DualSet::new(group, irreps)
}

/// Four characters and the two-dimensional representation of Q8.
pub fn quaternion_dual(group: Arc<FiniteGroup>) -> Result<DualSet> {
    check_order(&group, 8)?;
    // Index = unit + 4 * sign with units 1, i, j, k.
    let unit = |x: usize| x % 4;
    let sign = |x: usize| if x < 4 { 1.0 } else { -1.0 };
    let mut irreps = vec![Irrep::trivial(8)];
    for (label, kernel) in [("ker<i>", 1), ("ker<j>", 2), ("ker<k>", 3)] {
        irreps.push(Irrep::character(label, (0..8).map(|x| {
            let u = unit(x);
            c(if u == 0 || u == kernel { 1.0 } else { -1.0 }, 0.0)
        }))?);
    }
    let (o, one, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let units = [mat2(one, o, o, one), mat2(i, o, o, -i), mat2(o, one, -one, o), mat2(o, i, i, o)];
    let matrices = (0..8).map(|x| units[unit(x)].scale(sign(x))).collect();
    irreps.push(Irrep::new("quaternion", matrices)?);
    DualSet::new(group, irreps)
}

/// Partitions of `n` in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Standard Young tableaux of a shape, each as the `(row, col)` cell of entries `1..=n`.
pub fn standard_tableaux(shape: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(shape: &[usize], rows: &mut Vec<usize>, cells: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cells.len() == shape.iter().sum::<usize>() {
            out.push(cells.clone());
            return;
        }
        for r in 0..shape.len() {
            if rows[r] < shape[r] && (r == 0 || rows[r - 1] > rows[r]) {
                cells.push((r, rows[r]));
                rows[r] += 1;
                rec(shape, rows, cells, out);
                rows[r] -= 1;
                cells.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(shape, &mut vec![0; shape.len()], &mut Vec::new(), &mut out);
    out
}

/// Young's orthogonal form of the adjacent transposition `(i+1 i+2)` on the
/// tableaux basis of one shape.
fn young_generator(tableaux: &[Vec<(usize, usize)>], i: usize) -> CMatrix {
    let d = tableaux.len();
    let content = |cell: (usize, usize)| cell.1 as f64 - cell.0 as f64;
    let mut m = CMatrix::zeros(d, d);
    for (t, cells) in tableaux.iter().enumerate() {
        let r = content(cells[i + 1]) - content(cells[i]);
        m[(t, t)] = c(1.0 / r, 0.0);
        if r.abs() > 1.0 {
            let mut swapped = cells.clone();
            swapped.swap(i, i + 1);
            let s = tableaux.iter().position(|x| *x == swapped).expect("swap of a standard tableau");
            m[(s, t)] = c((1.0 - 1.0 / (r * r)).sqrt(), 0.0);
        }
    }
    m
}

/// Irreps of S_n, one per partition, in Young's orthogonal form.
pub fn symmetric_dual(group: Arc<FiniteGroup>, n: usize) -> Result<DualSet> {
    let perms = permutations(n);
    check_order(&group, perms.len())?;
    let transposition = |i: usize| {
        let mut p: Vec<u8> = (0..n as u8).collect();
        p.swap(i, i + 1);
        perms.iter().position(|q| *q == p).expect("transposition is a permutation")
    };
    let mut irreps = Vec::new();
    for shape in partitions(n) {
        let tableaux = standard_tableaux(&shape);
        let gens: Vec<_> = (0..n.saturating_sub(1)).map(|i| (transposition(i), young_generator(&tableaux, i))).collect();
        let label = format!("{shape:?}");
        let pi = if gens.is_empty() { Irrep::trivial(1) } else { Irrep::from_generators(label, &group, &gens)? };
        irreps.push(pi);
    }
    if let Some(first) = irreps.first_mut() {
        if first.is_trivial() {
            *first = Irrep::trivial(group.order());
        }
    }
    DualSet::new(group, irreps)
}
