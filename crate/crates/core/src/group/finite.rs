use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense element index into a [`FiniteGroup`].
pub type Element = usize;

/// Largest order accepted for any finite group.
pub const MAX_ORDER: usize = 4096;

/// Orders up to this bound get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY: usize = 256;

const RANDOM_ASSOCIATIVITY_TRIPLES: usize = 10_000;

/// A finite group given by its Cayley table.
///
/// Elements are the indices `0..order`. The identity is stored explicitly,
/// so index 0 need not be the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    identity: Element,
    inverses: Vec<Element>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Validates a row-major Cayley table and builds the group.
    ///
    /// `table[a * order + b]` is the product `ab`.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<usize>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("order must be positive".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::Unsupported(format!("order {order} exceeds cap {MAX_ORDER}")));
        }
        if table.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, found {}",
                order * order,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        check_latin_square(order, &table)?;

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;

        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a * order + b] == identity)
                .expect("Latin square row contains the identity");
            if table[inv * order + a] != identity {
                return Err(Error::InvalidTable(format!("element {a} has no two-sided inverse")));
            }
            inverses[a] = inv;
        }

        let names = match names {
            Some(n) if n.len() != order => {
                return Err(Error::InvalidTable(format!(
                    "{} element names for order {order}",
                    n.len()
                )))
            }
            Some(n) => n,
            None => (0..order).map(|i| i.to_string()).collect(),
        };

        let group = FiniteGroup {
            name: name.into(),
            order,
            table: table.into_iter().map(|x| x as u32).collect(),
            identity,
            inverses,
            names,
        };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let fail = |a, b, c| {
            Err(Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})")))
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..RANDOM_ASSOCIATIVITY_TRIPLES {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return fail(a, b, c);
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn element_name(&self, a: Element) -> &str {
        &self.names[a]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    /// Looks up an element by its display name.
    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    /// Unchecked group product for hot loops.
    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b] as Element
    }

    /// Group product with index validation.
    pub fn compose(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    #[inline]
    pub fn inverse(&self, a: Element) -> Element {
        self.inverses[a]
    }

    pub fn check(&self, a: Element) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a, order: self.order })
        }
    }

    /// `g⁻¹ x g`.
    pub fn conjugate(&self, x: Element, g: Element) -> Element {
        self.mul(self.mul(self.inverse(g), x), g)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<Element> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Element>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let members: BTreeSet<Element> = (0..self.order).map(|g| self.conjugate(x, g)).collect();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members.into_iter().collect());
        }
        classes
    }

    /// Uniform (Haar) draw.
    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        rng.random_range(0..self.order)
    }
}

fn check_latin_square(order: usize, table: &[usize]) -> Result<()> {
    let mut seen = vec![false; order];
    for r in 0..order {
        seen.iter_mut().for_each(|s| *s = false);
        for c in 0..order {
            let v = table[r * order + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTable(format!("row {r} repeats {v}")));
            }
        }
    }
    for c in 0..order {
        seen.iter_mut().for_each(|s| *s = false);
        for r in 0..order {
            let v = table[r * order + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTable(format!("column {c} repeats {v}")));
            }
        }
    }
    Ok(())
}
