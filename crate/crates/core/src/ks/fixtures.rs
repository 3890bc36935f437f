//! Standard finite KS sets in dimension 4 with integer-entry kets.

use crate::ks::OperatorSet;
use crate::linalg::{Ket, TolerancePolicy};

/// The nine orthogonal bases of the 18-vector set of Cabello, Estebaranz
/// and Garcia-Alcaine. Each vector occurs in exactly two bases.
pub const CABELLO18_BASES: [[[i8; 4]; 4]; 9] = [
    [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
    [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
    [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
    [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
    [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
    [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
    [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
    [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
    [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
];

fn label(v: &[i8; 4]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn same_ray(a: &[i8; 4], b: &[i8; 4]) -> bool {
    a == b || a.iter().zip(b).all(|(x, y)| *x == -*y)
}

fn set_from_vectors(vectors: Vec<[i8; 4]>) -> OperatorSet {
    let kets = vectors
        .iter()
        .map(|v| {
            let re: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            (label(v), Ket::from_real(&re).expect("nonzero fixture vector"))
        })
        .collect();
    OperatorSet::from_kets(4, kets, TolerancePolicy::default()).expect("fixture vectors are distinct rays")
}

/// Cabello-18 as rank-1 projectors (vector kind), in first-appearance order.
pub fn fixture_cabello18() -> OperatorSet {
    let mut vectors: Vec<[i8; 4]> = Vec::new();
    for basis in &CABELLO18_BASES {
        for v in basis {
            if !vectors.iter().any(|w| same_ray(v, w)) {
                vectors.push(*v);
            }
        }
    }
    set_from_vectors(vectors)
}

/// Peres' 24 rays in dimension 4: the standard basis, the twelve vectors
/// with two entries `+-1`, and the eight `(1, +-1, +-1, +-1)`.
pub fn fixture_peres24() -> OperatorSet {
    let mut vectors: Vec<[i8; 4]> = Vec::new();
    for i in 0..4 {
        let mut v = [0; 4];
        v[i] = 1;
        vectors.push(v);
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            for s in [1, -1] {
                let mut v = [0; 4];
                v[i] = 1;
                v[j] = s;
                vectors.push(v);
            }
        }
    }
    for signs in 0..8u8 {
        let mut v = [1; 4];
        for k in 0..3 {
            if signs >> k & 1 == 1 {
                v[k + 1] = -1;
            }
        }
        vectors.push(v);
    }
    set_from_vectors(vectors)
}
