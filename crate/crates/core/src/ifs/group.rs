use std::collections::VecDeque;

use crate::geometry::{Direction, Orthogonal};

/// Subgroup of O(2) generated by the orthogonal parts of the maps.
///
/// When the closure exceeds the order cap the group is treated as
/// infinite and `closed` is false; `elements` then holds the elements
/// found before giving up.
#[derive(Clone, Debug)]
pub struct RotationGroup {
    pub elements: Vec<Orthogonal>,
    pub closed: bool,
    tol: f64,
}

impl RotationGroup {
    /// Breadth-first closure under composition with the generators,
    /// identifying angles within `tol` modulo 2π.
    pub fn generate(generators: &[Orthogonal], max_order: usize, tol: f64) -> Self {
        let mut elements = vec![Orthogonal::IDENTITY];
        let mut queue: VecDeque<Orthogonal> = VecDeque::from([Orthogonal::IDENTITY]);
        while let Some(e) = queue.pop_front() {
            for g in generators {
                let p = g.compose(&e);
                if elements.iter().any(|x| x.approx_eq(&p, tol)) {
                    continue;
                }
                if elements.len() >= max_order {
                    return Self {
                        elements,
                        closed: false,
                        tol,
                    };
                }
                elements.push(p);
                queue.push_back(p);
            }
        }
        Self {
            elements,
            closed: true,
            tol,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Orthogonal) -> bool {
        self.elements.iter().any(|x| x.approx_eq(g, self.tol))
    }

    /// Images `g(θ)` of a direction under every element, without repeats.
    pub fn orbit(&self, d: &Direction) -> Vec<Direction> {
        let mut out: Vec<Direction> = Vec::with_capacity(self.elements.len());
        for g in &self.elements {
            let img = g.push_direction(d);
            if !out
                .iter()
                .any(|o| crate::geometry::angle_distance(o.angle(), img.angle()) <= self.tol)
            {
                out.push(img);
            }
        }
        out
    }
}
