#![allow(dead_code)]

use gbcodes::{build_gb_str, CssCode, Poly, RingPoly};
use rand::Rng;

pub fn ring(mask: u64, ell: usize) -> RingPoly {
    let exps: Vec<usize> = (0..ell).filter(|i| mask >> i & 1 == 1).collect();
    RingPoly::new(Poly::from_exponents(&exps), ell).unwrap()
}

/// The `[[10, 2, 3]]` code over ring size 5.
pub fn base10() -> CssCode {
    build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap()
}

pub fn random_poly<R: Rng>(rng: &mut R, max_deg: usize) -> Poly {
    loop {
        let exps: Vec<usize> = (0..=max_deg).filter(|_| rng.random_bool(0.5)).collect();
        if !exps.is_empty() {
            return Poly::from_exponents(&exps);
        }
    }
}

pub fn random_ring<R: Rng>(rng: &mut R, ell: usize) -> RingPoly {
    RingPoly::new(random_poly(rng, ell - 1), ell).unwrap()
}

/// Every error of weight at most `max_weight` on `n` qubits as `(ex, ez)`
/// supports; each nonidentity position is X, Y or Z.
pub fn paulis_up_to(n: usize, max_weight: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = vec![(vec![], vec![])];
    let mut frontier = out.clone();
    for _ in 0..max_weight {
        let mut next = Vec::new();
        for (ex, ez) in &frontier {
            let last = ex.iter().chain(ez.iter()).copied().max();
            let start = last.map_or(0, |l| l + 1);
            for q in start..n {
                for kind in 0..3 {
                    let (mut x, mut z) = (ex.clone(), ez.clone());
                    if kind != 2 {
                        x.push(q);
                    }
                    if kind != 0 {
                        z.push(q);
                    }
                    next.push((x, z));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
