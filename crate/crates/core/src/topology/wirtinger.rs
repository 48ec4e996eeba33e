//! Wirtinger presentations, loop words and homomorphisms into finite groups.

use serde::{Deserialize, Serialize};

use super::alexander::{KnotDiagram, Relation};
use super::diagram::{diagram, Degenerate};
use super::groups::FiniteGroup;
use crate::geom3::Point3;

/// Word in the Wirtinger generators: `(generator, ±1)` letters.
pub type Word = Vec<(usize, i32)>;

#[derive(Clone, Debug)]
pub struct WirtingerPresentation {
    pub generators: usize,
    pub relations: Vec<Relation>,
}

impl WirtingerPresentation {
    pub fn from_diagram(kd: &KnotDiagram) -> Self {
        Self { generators: kd.crossing_count(), relations: kd.relations.clone() }
    }

    /// Relators `x_out^{-1} x_over^{-eps} x_in x_over^{eps}`.
    pub fn relators(&self) -> Vec<Word> {
        self.relations
            .iter()
            .map(|r| vec![(r.out, -1), (r.over, -r.eps), (r.inc, 1), (r.over, r.eps)])
            .collect()
    }

    /// Relators satisfied by `images` in `g`.
    pub fn is_hom(&self, g: &FiniteGroup, images: &[u16]) -> bool {
        self.relators().iter().all(|w| eval_word(g, images, w) == g.identity)
    }
}

pub fn eval_word(g: &FiniteGroup, images: &[u16], w: &[(usize, i32)]) -> u16 {
    w.iter().fold(g.identity, |acc, &(x, e)| g.mul(acc, g.pow(images[x], e)))
}

/// Word of the closed polyline `lp` read in the projection of `kd`, starting
/// from its first vertex. Fails if the joint projection is not generic.
pub fn loop_word(kd: &KnotDiagram, knot: &[Point3], lp: &[Point3]) -> Result<Word, Degenerate> {
    let d = diagram(&[knot, lp], kd.diagram.proj)?;
    let mut under: Vec<(f64, usize, i32)> = d
        .crossings
        .iter()
        .filter(|c| c.under.comp == 1 && c.over.comp == 0)
        .map(|c| (c.under.key(), kd.arc_at(c.over.key()), -c.sign))
        .collect();
    under.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(under.into_iter().map(|(_, a, e)| (a, e)).collect())
}

/// Limits for the homomorphism search.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub nodes: usize,
    pub max_homs: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { nodes: 200_000, max_homs: 64 }
    }
}

const UNSET: u16 = u16::MAX;

/// Non-abelian homomorphisms into `g`, with generator 0 sent to a class
/// representative. Stops after the node or result limit.
pub fn find_homs(p: &WirtingerPresentation, g: &FiniteGroup, budget: SearchBudget) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    if p.generators == 0 {
        return out;
    }
    let mut nodes = 0usize;
    for class in &g.classes {
        if class.len() == 1 {
            continue;
        }
        let mut img = vec![UNSET; p.generators];
        img[0] = class[0];
        dfs(p, g, class, img, &mut nodes, budget, &mut out);
        if nodes >= budget.nodes || out.len() >= budget.max_homs {
            break;
        }
    }
    out
}

fn propagate(p: &WirtingerPresentation, g: &FiniteGroup, img: &mut [u16]) -> bool {
    loop {
        let mut changed = false;
        for r in &p.relations {
            let o = img[r.over];
            if o == UNSET {
                continue;
            }
            let conj_in = |x: u16| g.mul(g.mul(g.pow(o, -r.eps), x), g.pow(o, r.eps));
            let conj_out = |x: u16| g.mul(g.mul(g.pow(o, r.eps), x), g.pow(o, -r.eps));
            match (img[r.inc], img[r.out]) {
                (UNSET, UNSET) => {}
                (i, UNSET) => {
                    img[r.out] = conj_in(i);
                    changed = true;
                }
                (UNSET, j) => {
                    img[r.inc] = conj_out(j);
                    changed = true;
                }
                (i, j) => {
                    if conj_in(i) != j {
                        return false;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dfs(
    p: &WirtingerPresentation,
    g: &FiniteGroup,
    class: &[u16],
    mut img: Vec<u16>,
    nodes: &mut usize,
    budget: SearchBudget,
    out: &mut Vec<Vec<u16>>,
) {
    if *nodes >= budget.nodes || out.len() >= budget.max_homs {
        return;
    }
    *nodes += 1;
    if !propagate(p, g, &mut img) {
        return;
    }
    match img.iter().position(|&x| x == UNSET) {
        None => {
            if img.iter().any(|&x| x != img[0]) {
                out.push(img);
            }
        }
        Some(a) => {
            for &e in class {
                let mut next = img.clone();
                next[a] = e;
                dfs(p, g, class, next, nodes, budget, out);
                if *nodes >= budget.nodes || out.len() >= budget.max_homs {
                    return;
                }
            }
        }
    }
}

/// A homomorphism witnessing that a loop is non-trivial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub group: String,
    /// Generator images as permutations of `0..degree`.
    pub images: Vec<Vec<u8>>,
    /// Image of the loop.
    pub loop_image: Vec<u8>,
    pub crossings: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::alexander::KnotDiagram;
    use crate::topology::diagram::Projection;
    use crate::geom3::Vec3;

    fn trefoil() -> Vec<Point3> {
        (0..48)
            .map(|i| {
                let s = std::f64::consts::TAU * i as f64 / 48.0;
                let r = 2.0 + (3.0 * s).cos();
                Point3::new(r * (2.0 * s).cos(), r * (2.0 * s).sin(), (3.0 * s).sin())
            })
            .collect()
    }

    #[test]
    fn trefoil_maps_onto_s3() {
        let k = trefoil();
        let kd = KnotDiagram::new(&k, Projection::new(Vec3::new(0.1, 0.2, 1.0))).unwrap();
        let p = WirtingerPresentation::from_diagram(&kd);
        let s3 = FiniteGroup::symmetric(3);
        let homs = find_homs(&p, &s3, SearchBudget::default());
        assert!(!homs.is_empty());
        for h in &homs {
            assert!(p.is_hom(&s3, h));
        }
    }
}
