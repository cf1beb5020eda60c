#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use virtualk::detfun::{BasedComplex, NineGrid, Splitting};
use virtualk::field::{Field, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<F: Field>(field: &F, rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<F::Elem> {
    let data = (0..rows * cols).map(|_| field.from_i64(rng.gen_range(-4..=4))).collect();
    Matrix::from_rows(rows, cols, data)
}

pub fn random_invertible<F: Field>(field: &F, rng: &mut impl Rng, n: usize) -> Matrix<F::Elem> {
    loop {
        let m = random_matrix(field, rng, n, n);
        if !field.is_zero(&m.det(field)) {
            return m;
        }
    }
}

/// Unipotent matrix with random entries in the allowed (row block, column
/// block) positions above the diagonal.
fn unipotent<F: Field>(
    field: &F,
    rng: &mut impl Rng,
    blocks: &[usize],
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Matrix<F::Elem> {
    let n: usize = blocks.iter().sum();
    let mut m = Matrix::identity(field, n);
    let offsets: Vec<usize> = blocks.iter().scan(0, |acc, &b| { let o = *acc; *acc += b; Some(o) }).collect();
    for bi in 0..blocks.len() {
        for bj in bi + 1..blocks.len() {
            if !allowed(bi, bj) {
                continue;
            }
            for r in 0..blocks[bi] {
                for c in 0..blocks[bj] {
                    m.set(offsets[bi] + r, offsets[bj] + c, field.from_i64(rng.gen_range(-3..=3)));
                }
            }
        }
    }
    m
}

/// Random acyclic complex with `len` degrees starting at `lowest`, every
/// dimension at most `max_dim`.
pub fn random_acyclic<F: Field>(
    field: &F,
    rng: &mut impl Rng,
    lowest: i64,
    len: usize,
    max_dim: usize,
) -> BasedComplex<F> {
    // sigma[n] = rank of d_n; dims[n] = sigma[n-1] + sigma[n].
    let mut sigma = vec![0usize; len];
    for n in 0..len.saturating_sub(1) {
        let prev = if n == 0 { 0 } else { sigma[n - 1] };
        let room = max_dim.saturating_sub(prev);
        sigma[n] = rng.gen_range(0..=room);
    }
    let dims: Vec<usize> = (0..len).map(|n| sigma[n] + if n == 0 { 0 } else { sigma[n - 1] }).collect();
    let maps: Vec<Matrix<F::Elem>> = (0..len.saturating_sub(1))
        .map(|n| {
            let mut m = Matrix::zeros(field, dims[n + 1], dims[n]);
            for j in 0..sigma[n] {
                m.set(sigma[n + 1] + j, j, field.one());
            }
            m
        })
        .collect();
    let c = BasedComplex::new(field.clone(), lowest, dims.clone(), maps).unwrap();
    let bases: Vec<_> = dims.iter().map(|&d| random_invertible(field, rng, d)).collect();
    c.change_basis(&bases).unwrap()
}

/// Random 3×3 diagram built from four acyclic corners glued along a
/// bifiltration of the center. With `corrupt`, the standalone top-left
/// corner has one basis vector doubled.
pub fn random_grid<F: Field>(field: &F, rng: &mut impl Rng, corrupt: bool) -> NineGrid<F> {
    let lowest = 0;
    let len = 3;
    let corners: Vec<BasedComplex<F>> = loop {
        let cs: Vec<_> = (0..4).map(|_| random_acyclic(field, rng, lowest, len, 2)).collect();
        if !corrupt || cs[0].maps().iter().any(|m| !m.is_zero(field)) {
            break cs;
        }
    };
    // Block order in the center: 00, 02, 20, 22.
    let allowed = |i: usize, j: usize| !matches!((i, j), (1, 2));
    let dims_of = |n: usize| -> Vec<usize> { corners.iter().map(|c| c.dims()[n]).collect() };
    let unis: Vec<_> = (0..len).map(|n| unipotent(field, rng, &dims_of(n), &allowed)).collect();
    let center_dims: Vec<usize> = (0..len).map(|n| dims_of(n).iter().sum()).collect();
    let center_maps: Vec<_> = (0..len - 1)
        .map(|n| {
            let b = dims_of(n);
            let b1 = dims_of(n + 1);
            let mut diag = Matrix::zeros(field, center_dims[n + 1], center_dims[n]);
            let (mut r0, mut c0) = (0, 0);
            for k in 0..4 {
                let d = &corners[k].maps()[n];
                for r in 0..b1[k] {
                    for c in 0..b[k] {
                        diag.set(r0 + r, c0 + c, d.get(r, c).clone());
                    }
                }
                r0 += b1[k];
                c0 += b[k];
            }
            let inv = unis[n + 1].inverse(field).unwrap();
            inv.mul(field, &diag.mul(field, &unis[n]))
        })
        .collect();
    let center = BasedComplex::new(field.clone(), lowest, center_dims.clone(), center_maps).unwrap();

    let positions = |n: usize, which: &[usize]| -> Vec<usize> {
        let b = dims_of(n);
        let mut out = Vec::new();
        let mut off = 0;
        for k in 0..4 {
            if which.contains(&k) {
                out.extend(off..off + b[k]);
            }
            off += b[k];
        }
        out
    };
    let restrict = |which: &[usize]| -> BasedComplex<F> {
        let dims: Vec<usize> = (0..len).map(|n| positions(n, which).len()).collect();
        let maps = (0..len - 1)
            .map(|n| center.maps()[n].select(&positions(n + 1, which), &positions(n, which)))
            .collect();
        BasedComplex::new(field.clone(), lowest, dims, maps).unwrap()
    };
    let x01 = restrict(&[0, 1]);
    let x10 = restrict(&[0, 2]);
    let x12 = restrict(&[1, 3]);
    let x21 = restrict(&[2, 3]);
    let mut x00 = corners[0].clone();
    if corrupt {
        // Rescale one basis vector: torsion moves by a factor of 2.
        let n0 = x00.dims().iter().position(|&d| d > 0).unwrap();
        let bases: Vec<_> = x00
            .dims()
            .iter()
            .enumerate()
            .map(|(n, &d)| {
                let mut u = Matrix::identity(field, d);
                if n == n0 {
                    u.set(0, 0, field.from_i64(2));
                }
                u
            })
            .collect();
        x00 = x00.change_basis(&bases).unwrap();
    }
    let lead = |c: &BasedComplex<F>| Splitting::leading(lowest, c.dims());
    NineGrid {
        row_splits: [
            lead(&corners[0]),
            Splitting { lowest, sub_positions: (0..len).map(|n| positions(n, &[0, 2])).collect() },
            lead(&corners[2]),
        ],
        col_splits: [lead(&corners[0]), lead(&x01), lead(&corners[1])],
        entries: [
            [x00, x01, corners[1].clone()],
            [x10, center, x12],
            [corners[2].clone(), x21, corners[3].clone()],
        ],
    }
}

/// `random_acyclic` with the starting degree and length drawn from ranges.
pub fn any_acyclic<F: Field>(
    field: &F,
    rng: &mut impl Rng,
    lowest: std::ops::RangeInclusive<i64>,
    len: std::ops::RangeInclusive<usize>,
    max_dim: usize,
) -> BasedComplex<F> {
    let lo = rng.gen_range(lowest);
    let n = rng.gen_range(len);
    random_acyclic(field, rng, lo, n, max_dim)
}
