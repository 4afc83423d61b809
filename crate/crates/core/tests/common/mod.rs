//! Shared fixtures for the integration tests.

use qcurv::poly::{rat, MultiPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Symmetric integer matrix H and the quadratic ½xᵀHx + bᵀx + c on R⁴.
pub fn quadratic(h: &[[i64; 4]; 4], b: &[i64; 4], c: i64) -> MultiPoly {
    let mut p = MultiPoly::constant(4, rat(c, 1));
    for i in 0..4 {
        let mut e = vec![0u32; 4];
        e[i] = 1;
        p.add_term(e, rat(b[i], 1));
        for j in i..4 {
            let mut e = vec![0u32; 4];
            e[i] += 1;
            e[j] += 1;
            let coeff = if i == j { rat(h[i][i], 2) } else { rat(h[i][j], 1) };
            p.add_term(e, coeff);
        }
    }
    p
}

/// -BᵀB for a k×4 integer matrix B: negative definite when rank 4, degenerate otherwise.
fn neg_gram(rows: &[[i64; 4]]) -> [[i64; 4]; 4] {
    let mut h = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            h[i][j] = -rows.iter().map(|r| r[i] * r[j]).sum::<i64>();
        }
    }
    h
}

pub fn random_suite() -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ed);
    let mut out = Vec::new();
    for k in 0..50 {
        let rank = match k % 5 {
            0 | 1 => 4,
            2 => 3,
            3 => 2,
            _ => 0,
        };
        let h = if rank == 0 {
            let mut h = [[0i64; 4]; 4];
            for i in 0..4 {
                for j in i..4 {
                    let v = rng.random_range(-3..=3);
                    h[i][j] = v;
                    h[j][i] = v;
                }
            }
            h
        } else {
            let mut rows = Vec::new();
            for i in 0..rank {
                let mut r = [0i64; 4];
                for (j, x) in r.iter_mut().enumerate() {
                    *x = rng.random_range(-2..=2);
                    if j == i {
                        *x += 3;
                    }
                }
                rows.push(r);
            }
            neg_gram(&rows)
        };
        let b = [0; 4].map(|_: i64| rng.random_range(-3..=3));
        out.push(quadratic(&h, &b, rng.random_range(-5..=5)));
    }
    out
}
