// Schoolbook arithmetic in Z_q[X]/(X^n + 1) on plain i64 vectors (ascending),
// written independently of the library's ring code.

#![allow(dead_code)]

pub fn norm(p: &[i64], q: i64) -> Vec<i64> {
    p.iter().map(|c| c.rem_euclid(q)).collect()
}

/// Full product followed by long division by X^n + 1.
pub fn mul(a: &[i64], b: &[i64], n: usize, q: i64) -> Vec<i64> {
    let mut full = vec![0i64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            full[i + j] += x * y;
        }
    }
    for top in (n..full.len()).rev() {
        let c = full[top];
        full[top] = 0;
        full[top - n] -= c;
    }
    full.truncate(n);
    full.resize(n, 0);
    norm(&full, q)
}

pub fn add(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    let len = a.len().max(b.len());
    let g = |v: &[i64], i: usize| v.get(i).copied().unwrap_or(0);
    norm(&(0..len).map(|i| g(a, i) + g(b, i)).collect::<Vec<_>>(), q)
}

pub fn sub(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    let neg: Vec<i64> = b.iter().map(|c| -c).collect();
    add(a, &neg, q)
}

pub fn dot(u: &[Vec<i64>], v: &[Vec<i64>], n: usize, q: i64) -> Vec<i64> {
    u.iter().zip(v).fold(vec![0; n], |acc, (x, y)| add(&acc, &mul(x, y, n, q), q))
}

/// Row-major matrix times vector.
pub fn matvec(a: &[Vec<Vec<i64>>], v: &[Vec<i64>], n: usize, q: i64) -> Vec<Vec<i64>> {
    a.iter().map(|row| dot(row, v, n, q)).collect()
}

pub fn transpose(a: &[Vec<Vec<i64>>]) -> Vec<Vec<Vec<i64>>> {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Centered representative in (-q/2, q/2].
pub fn centered(p: &[i64], q: i64) -> Vec<i64> {
    norm(p, q).iter().map(|c| if *c > q / 2 { c - q } else { *c }).collect()
}
