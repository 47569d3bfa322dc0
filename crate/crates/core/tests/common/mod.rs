#![allow(dead_code)]

use pauli_susy::field::Axis;
use pauli_susy::Verdict;
use rand::Rng;

/// A polynomial in `x, y, z` kept as explicit monomials so that its parity
/// can be read off the exponents.
#[derive(Debug, Clone)]
pub struct Poly {
    pub terms: Vec<(f64, [u32; 3])>,
}

impl Poly {
    pub fn to_dsl(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, e)| {
                let mut s = format!("({c})");
                for (name, &p) in ["x", "y", "z"].iter().zip(e) {
                    if p > 0 {
                        s.push_str(&format!(" * {name}^{p}"));
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }

    /// Parity under `x_axis ↦ −x_axis` from the exponents alone. Assumes the
    /// monomials are distinct and the coefficients non-zero.
    pub fn parity(&self, axis: Axis) -> Verdict {
        if self.terms.is_empty() {
            return Verdict::Zero;
        }
        let k = axis.index();
        let odd = self.terms.iter().filter(|(_, e)| e[k] % 2 == 1).count();
        if odd == 0 {
            Verdict::Even
        } else if odd == self.terms.len() {
            Verdict::Odd
        } else {
            Verdict::None
        }
    }
}

pub fn monomials(max_degree: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=max_degree {
        for b in 0..=max_degree - a {
            for c in 0..=max_degree - a - b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn coefficient<R: Rng>(rng: &mut R) -> f64 {
    let mag: f64 = rng.random_range(0.5..1.5);
    if rng.random_bool(0.5) { mag } else { -mag }
}

/// A random component with the given exponent parities, broken by a stray
/// monomial some of the time so every verdict shows up.
/// `target[k]` is the intended exponent parity along axis `k` (0 even, 1 odd).
pub fn component_with_parity<R: Rng>(rng: &mut R, max_degree: u32, target: [u32; 3]) -> Poly {
    if rng.random_bool(0.15) {
        return Poly { terms: vec![] };
    }
    let all = monomials(max_degree);
    let matching: Vec<[u32; 3]> = all
        .iter()
        .copied()
        .filter(|e| (0..3).all(|k| e[k] % 2 == target[k]))
        .collect();
    let mut chosen: Vec<[u32; 3]> = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let e = matching[rng.random_range(0..matching.len())];
        if !chosen.contains(&e) {
            chosen.push(e);
        }
    }
    if rng.random_bool(0.25) {
        let e = all[rng.random_range(0..all.len())];
        if !chosen.contains(&e) {
            chosen.push(e);
        }
    }
    Poly {
        terms: chosen.into_iter().map(|e| (coefficient(rng), e)).collect(),
    }
}

/// Three components aimed at a random set of reflection-symmetric axes:
/// along a chosen axis `k`, `A_k` is made odd and the others even.
pub fn random_potential<R: Rng>(rng: &mut R, max_degree: u32) -> [Poly; 3] {
    let aimed: [bool; 3] = std::array::from_fn(|_| rng.random_bool(0.5));
    std::array::from_fn(|j| {
        let target = std::array::from_fn(|k| {
            if aimed[k] {
                u32::from(j == k)
            } else {
                rng.random_range(0..2)
            }
        });
        component_with_parity(rng, max_degree, target)
    })
}
