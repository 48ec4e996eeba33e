//! Integer polynomials, Wirtinger data of a knot diagram and the Alexander
//! polynomial.

use super::diagram::{diagram, directions, Degenerate, Diagram, Projection};
use crate::geom3::Point3;

/// Dense integer polynomial in `t`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<i128>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overflow;

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: i128) -> Self {
        Poly(vec![c]).trim()
    }

    pub fn from_coeffs(c: &[i128]) -> Self {
        Poly(c.to_vec()).trim()
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Result<Self, Overflow> {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![0i128; n];
        for (i, x) in v.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = o.0.get(i).copied().unwrap_or(0);
            *x = a.checked_add(b).ok_or(Overflow)?;
        }
        Ok(Poly(v).trim())
    }

    pub fn neg(&self) -> Self {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero());
        }
        let mut v = vec![0i128; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                let p = a.checked_mul(*b).ok_or(Overflow)?;
                v[i + j] = v[i + j].checked_add(p).ok_or(Overflow)?;
            }
        }
        Ok(Poly(v).trim())
    }

    /// Exact quotient; `None` if `o` does not divide `self` over the integers.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.0.clone();
        let dn = o.0.len() - 1;
        let lead = *o.0.last().unwrap();
        if rem.len() <= dn {
            return None;
        }
        let mut q = vec![0i128; rem.len() - dn];
        for k in (0..q.len()).rev() {
            let c = rem[k + dn];
            if c % lead != 0 {
                return None;
            }
            let f = c / lead;
            q[k] = f;
            for (j, b) in o.0.iter().enumerate() {
                rem[k + j] = rem[k + j].checked_sub(f.checked_mul(*b)?)?;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Poly(q).trim())
    }

    pub fn eval(&self, t: i128) -> i128 {
        self.0.iter().rev().fold(0i128, |acc, c| acc * t + c)
    }

    /// Strips powers of `t` and fixes the sign so that the value at 1 is
    /// positive.
    pub fn normalized(&self) -> Self {
        let mut v: Vec<i128> = self.0.iter().copied().skip_while(|&c| c == 0).collect();
        let at_one: i128 = v.iter().sum();
        let lead_sign = v.last().map_or(1, |c| c.signum());
        if at_one < 0 || (at_one == 0 && lead_sign < 0) {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        Poly(v).trim()
    }
}

/// Fraction-free (Bareiss) determinant over `Z[t]`.
pub fn determinant(mut m: Vec<Vec<Poly>>) -> Result<Poly, Overflow> {
    let n = m.len();
    if n == 0 {
        return Ok(Poly::constant(1));
    }
    let mut sign = 1i128;
    let mut prev = Poly::constant(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(Poly::zero());
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let a = m[i][j].mul(&m[k][k])?;
                let b = m[i][k].mul(&m[k][j])?;
                let num = a.sub(&b)?;
                m[i][j] = num.div_exact(&prev).ok_or(Overflow)?;
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { d.neg() } else { d })
}

/// Wirtinger relation `x_out = x_over^{-eps} x_in x_over^{eps}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub over: usize,
    pub inc: usize,
    pub out: usize,
    pub eps: i32,
}

/// A single-component diagram with its arcs. Generator `x_a` is the loop
/// passing under arc `a` from its left to its right.
#[derive(Clone, Debug)]
pub struct KnotDiagram {
    pub diagram: Diagram,
    /// Sorted positions (`segment + t`) of the under-crossings along the knot.
    pub under_keys: Vec<f64>,
    pub relations: Vec<Relation>,
}

impl KnotDiagram {
    pub fn new(vertices: &[Point3], proj: Projection) -> Result<Self, Degenerate> {
        let d = diagram(&[vertices], proj)?;
        let mut unders: Vec<(f64, usize)> = d.crossings.iter().enumerate().map(|(i, c)| (c.under.key(), i)).collect();
        unders.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let under_keys: Vec<f64> = unders.iter().map(|u| u.0).collect();
        let c = under_keys.len();
        let mut relations = Vec::with_capacity(c);
        for (j, &(_, ci)) in unders.iter().enumerate() {
            let cr = &d.crossings[ci];
            relations.push(Relation {
                over: arc_index(&under_keys, cr.over.key()),
                inc: j,
                out: (j + 1) % c,
                eps: -cr.sign,
            });
        }
        Ok(Self { diagram: d, under_keys, relations })
    }

    pub fn crossing_count(&self) -> usize {
        self.under_keys.len()
    }

    /// Arc containing the knot position `key`.
    pub fn arc_at(&self, key: f64) -> usize {
        arc_index(&self.under_keys, key)
    }

    /// Alexander matrix rows, one per crossing, with columns per arc.
    pub fn alexander_matrix(&self) -> Vec<Vec<Poly>> {
        let c = self.crossing_count();
        let mut m = vec![vec![Poly::zero(); c]; c];
        for (r, rel) in self.relations.iter().enumerate() {
            let (o, i, j) = if rel.eps > 0 {
                (Poly::from_coeffs(&[-1, 1]), Poly::constant(1), Poly::from_coeffs(&[0, -1]))
            } else {
                (Poly::from_coeffs(&[1, -1]), Poly::from_coeffs(&[0, 1]), Poly::constant(-1))
            };
            for (col, val) in [(rel.over, o), (rel.inc, i), (rel.out, j)] {
                m[r][col] = m[r][col].add(&val).expect("small entries");
            }
        }
        m
    }

    /// Normalized Alexander polynomial.
    pub fn alexander(&self) -> Result<Poly, Overflow> {
        let c = self.crossing_count();
        if c == 0 {
            return Ok(Poly::constant(1));
        }
        let m = self.alexander_matrix();
        let minor: Vec<Vec<Poly>> = m[..c - 1].iter().map(|row| row[..c - 1].to_vec()).collect();
        Ok(determinant(minor)?.normalized())
    }

    /// True when the arcs are connected through the relations, so the
    /// abelianization is infinite cyclic.
    pub fn abelianization_is_z(&self) -> bool {
        let c = self.crossing_count();
        if c == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..c).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for rel in &self.relations {
            let a = find(&mut parent, rel.inc);
            let b = find(&mut parent, rel.out);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..c).all(|x| find(&mut parent, x) == root)
    }
}

fn arc_index(keys: &[f64], key: f64) -> usize {
    if keys.is_empty() {
        return 0;
    }
    keys.partition_point(|&k| k < key) % keys.len()
}

/// Diagram with the fewest crossings among `tries` seeded directions.
pub fn best_diagram(vertices: &[Point3], seed: u64, tries: usize) -> Option<KnotDiagram> {
    let mut best: Option<KnotDiagram> = None;
    for dir in directions(seed, tries) {
        if let Ok(kd) = KnotDiagram::new(vertices, Projection::new(dir)) {
            if best.as_ref().map_or(true, |b| kd.crossing_count() < b.crossing_count()) {
                best = Some(kd);
            }
        }
    }
    best
}

/// Human-readable form like `t^2 - t + 1`.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, &c) in p.0.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        let coef = if mag == 1 && i > 0 { String::new() } else { mag.to_string() };
        match i {
            0 => s.push_str(&coef),
            1 => s.push_str(&format!("{coef}t")),
            _ => s.push_str(&format!("{coef}t^{i}")),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![
            vec![Poly::from_coeffs(&[1, 1]), Poly::constant(2), Poly::constant(0)],
            vec![Poly::constant(3), Poly::from_coeffs(&[0, 1]), Poly::constant(1)],
            vec![Poly::constant(0), Poly::constant(1), Poly::from_coeffs(&[2, 0, 1])],
        ];
        let d = determinant(m).unwrap();
        // cofactor expansion along the first row: (1+t)(t(2+t^2) - 1) - 2 * 3(2+t^2)
        let expect = Poly::from_coeffs(&[-13, 1, -4, 1, 1]);
        assert_eq!(d, expect);
    }

    #[test]
    fn division_and_format() {
        let a = Poly::from_coeffs(&[-1, 0, 0, 1]);
        let b = Poly::from_coeffs(&[-1, 1]);
        assert_eq!(a.div_exact(&b).unwrap(), Poly::from_coeffs(&[1, 1, 1]));
        assert!(Poly::from_coeffs(&[1, 0, 1]).div_exact(&b).is_none());
        assert_eq!(format_poly(&Poly::from_coeffs(&[1, -1, 1])), "t^2 - t + 1");
        assert_eq!(Poly::from_coeffs(&[0, 0, -1, 3, -1]).normalized(), Poly::from_coeffs(&[-1, 3, -1]));
    }
}
