//! Small permutation groups with multiplication tables.

use std::collections::HashMap;

/// A finite permutation group; elements are indexed, `mul[a * n + b]` is
/// `a ∘ b` (apply `b` first).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub elems: Vec<Vec<u8>>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    pub identity: u16,
    /// Conjugacy classes, identity class excluded.
    pub classes: Vec<Vec<u16>>,
}

impl FiniteGroup {
    /// Closure of `gens` acting on `degree` points.
    pub fn generated(name: &str, degree: usize, gens: &[Vec<u8>]) -> Self {
        let id: Vec<u8> = (0..degree as u8).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(id, 0)]);
        let mut frontier = 0;
        while frontier < elems.len() {
            let e = elems[frontier].clone();
            for g in gens {
                let p = compose(g, &e);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            frontier += 1;
        }
        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&compose(&elems[a], &elems[b])] as u16;
            }
        }
        let inv: Vec<u16> = (0..n).map(|a| (0..n).find(|&b| mul[a * n + b] == 0).unwrap() as u16).collect();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut classes = Vec::new();
        for a in 1..n {
            if seen[a] {
                continue;
            }
            let mut class: Vec<u16> = (0..n)
                .map(|g| mul[mul[g * n + a] as usize * n + inv[g] as usize])
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c as usize] = true;
            }
            classes.push(class);
        }
        Self { name: name.to_string(), elems, mul, inv, identity: 0, classes }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.elems.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u16, e: i32) -> u16 {
        let base = if e < 0 { self.inv(a) } else { a };
        (0..e.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn symmetric(n: usize) -> Self {
        let mut swap: Vec<u8> = (0..n as u8).collect();
        swap.swap(0, 1);
        let cycle: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
        Self::generated(&format!("S{n}"), n, &[swap, cycle])
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Vec<u8>> = (2..n)
            .map(|k| {
                let mut p: Vec<u8> = (0..n as u8).collect();
                p[0] = 1;
                p[1] = k as u8;
                p[k] = 0;
                p
            })
            .collect();
        Self::generated(&format!("A{n}"), n, &gens)
    }

    /// Symmetries of the regular `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
        let refl: Vec<u8> = (0..n).map(|i| ((n - i) % n) as u8).collect();
        Self::generated(&format!("D{n}"), n, &[rot, refl])
    }
}

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Default quotient list, searched in this order.
pub fn default_groups() -> Vec<FiniteGroup> {
    let mut g = vec![
        FiniteGroup::symmetric(3),
        FiniteGroup::dihedral(4),
        FiniteGroup::dihedral(5),
        FiniteGroup::symmetric(4),
        FiniteGroup::alternating(5),
        FiniteGroup::symmetric(5),
    ];
    g.extend((6..=10).map(FiniteGroup::dihedral));
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_classes() {
        let expect = [("S3", 6, 2), ("D4", 8, 4), ("D5", 10, 3), ("S4", 24, 4), ("A5", 60, 4), ("S5", 120, 6)];
        let groups = default_groups();
        for (g, (name, ord, ncls)) in groups.iter().zip(expect) {
            assert_eq!(g.name, name);
            assert_eq!(g.order(), ord);
            assert_eq!(g.classes.len(), ncls, "{name}");
        }
        assert_eq!(groups.last().unwrap().order(), 20);
        let s4 = &groups[3];
        for a in 0..24u16 {
            assert_eq!(s4.mul(a, s4.inv(a)), s4.identity);
            assert_eq!(s4.pow(a, 12), s4.identity);
        }
    }
}
