//! Intersection numbers `p_ij^k` and eigenmatrices of the edge scheme.

use serde::Serialize;

use super::Relation;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

fn check_host(r: usize, n: usize) -> Result<()> {
    if r < 4 {
        return Err(Error::InvalidParameters(format!(
            "the edge scheme needs at least 4 parts, got r = {r}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("part size n must be at least 1".into()));
    }
    Ok(())
}

fn c2(x: i64) -> i64 {
    if x < 2 {
        0
    } else {
        x * (x - 1) / 2
    }
}

/// The full `6 × 6` table `[i][j] = p_ij^k` for a fixed `k`.
pub fn intersection_table(k: usize, r: usize, n: usize) -> Result<[[i64; 6]; 6]> {
    check_host(r, n)?;
    if k > 5 {
        return Err(Error::InvalidParameters(format!("relation index {k} out of range")));
    }
    let (r, n) = (r as i64, n as i64);
    let t = match k {
        0 => [
            [1, 0, 0, 0, 0, 0],
            [0, 2 * (n - 1), 0, 0, 0, 0],
            [0, 0, (n - 1) * (n - 1), 0, 0, 0],
            [0, 0, 0, 2 * (r - 2) * n, 0, 0],
            [0, 0, 0, 0, 2 * (r - 2) * (n - 1) * n, 0],
            [0, 0, 0, 0, 0, c2(r - 2) * n * n],
        ],
        1 => [
            [0, 1, 0, 0, 0, 0],
            [1, n - 2, n - 1, 0, 0, 0],
            [0, n - 1, (n - 1) * (n - 2), 0, 0, 0],
            [0, 0, 0, (r - 2) * n, (r - 2) * n, 0],
            [0, 0, 0, (r - 2) * n, (r - 2) * (2 * n - 3) * n, 0],
            [0, 0, 0, 0, 0, c2(r - 2) * n * n],
        ],
        2 => [
            [0, 0, 1, 0, 0, 0],
            [0, 2, 2 * (n - 2), 0, 0, 0],
            [1, 2 * (n - 2), (n - 2) * (n - 2), 0, 0, 0],
            [0, 0, 0, 0, 2 * (r - 2) * n, 0],
            [0, 0, 0, 2 * (r - 2) * n, 2 * (r - 2) * (n - 2) * n, 0],
            [0, 0, 0, 0, 0, c2(r - 2) * n * n],
        ],
        3 => [
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, n - 1, n - 1, 0],
            [0, 0, 0, 0, (n - 1) * (n - 1), 0],
            [1, n - 1, 0, (r - 3) * n + 1, n - 1, (r - 3) * n],
            [0, n - 1, (n - 1) * (n - 1), n - 1, ((r - 2) * n - 1) * (n - 1), (r - 3) * (n - 1) * n],
            [0, 0, 0, (r - 3) * n, (r - 3) * (n - 1) * n, c2(r - 3) * n * n],
        ],
        4 => [
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 1, 2 * n - 3, 0],
            [0, 0, 0, n - 1, (n - 1) * (n - 2), 0],
            [0, 1, n - 1, 1, (r - 2) * n - 1, (r - 3) * n],
            [
                1,
                2 * n - 3,
                (n - 1) * (n - 2),
                (r - 2) * n - 1,
                (r - 3) * (n - 2) * n + (n - 1) * (n - 1),
                (r - 3) * (n - 1) * n,
            ],
            [0, 0, 0, (r - 3) * n, (r - 3) * (n - 1) * n, c2(r - 3) * n * n],
        ],
        _ => [
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 2 * (n - 1)],
            [0, 0, 0, 0, 0, (n - 1) * (n - 1)],
            [0, 0, 0, 4, 4 * (n - 1), 2 * (r - 4) * n],
            [0, 0, 0, 4 * (n - 1), 4 * (n - 1) * (n - 1), 2 * (r - 4) * (n - 1) * n],
            [
                1,
                2 * (n - 1),
                (n - 1) * (n - 1),
                2 * (r - 4) * n,
                2 * (r - 4) * (n - 1) * n,
                c2(r - 4) * n * n,
            ],
        ],
    };
    Ok(t)
}

/// `p_ij^k` for the edge scheme of the balanced complete `r`-partite graph.
pub fn intersection_number(i: usize, j: usize, k: usize, r: usize, n: usize) -> Result<i64> {
    if i > 5 || j > 5 {
        return Err(Error::InvalidParameters(format!("relation index ({i},{j}) out of range")));
    }
    Ok(intersection_table(k, r, n)?[i][j])
}

/// Valency `p_jj^0`: how many edges stand in relation `j` to a fixed edge.
pub fn valency(j: Relation, r: usize, n: usize) -> Result<i64> {
    let j = j.index();
    intersection_number(j, j, 0, r, n)
}

pub fn valencies(r: usize, n: usize) -> Result<[i64; 6]> {
    let t = intersection_table(0, r, n)?;
    Ok(std::array::from_fn(|j| t[j][j]))
}

pub type Matrix6 = [[Rational; 6]; 6];

/// First (`C`) and second (`D`) eigenmatrices: `A_i = Σ_j C(i,j) E_j` and
/// `E_i = Σ_j D(i,j) A_j`.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenmatrices {
    pub r: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_matrix")]
    pub c: Matrix6,
    #[serde(serialize_with = "ser_matrix")]
    pub d: Matrix6,
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix6, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(6))?;
    for row in m {
        let row: Vec<String> = row.iter().map(|q| q.to_string()).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl Eigenmatrices {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        check_host(r, n)?;
        let (ri, ni) = (r as i64, n as i64);
        let q = |v: i64| int(v);
        let f = rational::frac;

        let c: Matrix6 = [
            [q(1), q(1), q(1), q(1), q(1), q(1)],
            [
                q(2 * (ni - 1)),
                q(2 * (ni - 1)),
                q(2 * (ni - 1)),
                q(ni - 2),
                q(ni - 2),
                q(-2),
            ],
            [
                q((ni - 1) * (ni - 1)),
                q((ni - 1) * (ni - 1)),
                q((ni - 1) * (ni - 1)),
                q(1 - ni),
                q(1 - ni),
                q(1),
            ],
            [
                q(2 * (ri - 2) * ni),
                q((ri - 4) * ni),
                q(-2 * ni),
                q((ri - 2) * ni),
                q(-ni),
                q(0),
            ],
            [
                q(2 * (ri - 2) * (ni - 1) * ni),
                q((ri - 4) * (ni - 1) * ni),
                q(2 * (1 - ni) * ni),
                q((2 - ri) * ni),
                q(ni),
                q(0),
            ],
            [
                q(c2(ri - 2) * ni * ni),
                q((3 - ri) * ni * ni),
                q(ni * ni),
                q(0),
                q(0),
                q(0),
            ],
        ];

        let a = f((ri - 4) * (ri - 1), 2 * (ri - 2));
        let b = f(2 * (1 - ri), ri - 2);
        let g = f(ri * (ri - 3), 2);
        let h = f(ri * (3 - ri), 2 * (ri - 2));
        let k = f(ri, ri - 2);
        let cr2 = c2(ri);
        let raw: Matrix6 = [
            [q(1), q(1), q(1), q(1), q(1), q(1)],
            [q(ri - 1), q(ri - 1), q(ri - 1), a.clone(), a, b],
            [g.clone(), g.clone(), g, h.clone(), h, k],
            [
                q(ri * (ni - 1)),
                f(ri * (ni - 2), 2),
                q(-ri),
                f(ri * (ni - 1), 2),
                f(-ri, 2),
                q(0),
            ],
            [
                q(ri * (ri - 2) * (ni - 1)),
                f(ri * (ri - 2) * (ni - 2), 2),
                q(ri * (2 - ri)),
                f(ri * (1 - ni), 2),
                f(ri, 2),
                q(0),
            ],
            [
                q(cr2 * (ni - 1) * (ni - 1)),
                q(cr2 * (1 - ni)),
                q(cr2),
                q(0),
                q(0),
                q(0),
            ],
        ];
        let scale = f(1, cr2 * ni * ni);
        let d: Matrix6 = std::array::from_fn(|i| std::array::from_fn(|j| &raw[i][j] * &scale));
        Ok(Self { r, n, c, d })
    }

    pub fn product_cd(&self) -> Matrix6 {
        mat_mul(&self.c, &self.d)
    }

    pub fn product_dc(&self) -> Matrix6 {
        mat_mul(&self.d, &self.c)
    }

    /// Dimensions `dim U_i = D(i,0)·|E(Γ)|`.
    pub fn multiplicities(&self) -> [Rational; 6] {
        let m = int(c2(self.r as i64) * (self.n * self.n) as i64);
        std::array::from_fn(|i| &self.d[i][0] * &m)
    }
}

pub fn mat_mul(a: &Matrix6, b: &Matrix6) -> Matrix6 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..6).map(|k| &a[i][k] * &b[k][j]).sum::<Rational>())
    })
}

pub fn is_identity(m: &Matrix6) -> bool {
    (0..6).all(|i| (0..6).all(|j| m[i][j] == int((i == j) as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_spot_values() {
        assert_eq!(intersection_number(3, 3, 0, 4, 2).unwrap(), 8);
        assert_eq!(intersection_number(3, 5, 4, 5, 3).unwrap(), 6);
        let v = valencies(4, 2).unwrap();
        assert_eq!(v, [1, 2, 1, 8, 8, 4]);
        assert_eq!(v.iter().sum::<i64>(), 24);
    }

    #[test]
    fn tables_reject_small_r() {
        assert!(intersection_table(0, 3, 2).is_err());
        assert!(Eigenmatrices::new(3, 2).is_err());
    }

    #[test]
    fn tables_are_symmetric_and_row_sums_match_valency() {
        for (r, n) in [(4, 1), (4, 2), (5, 3), (7, 4)] {
            let val = valencies(r, n).unwrap();
            for k in 0..6 {
                let t = intersection_table(k, r, n).unwrap();
                for i in 0..6 {
                    for j in 0..6 {
                        assert_eq!(t[i][j], t[j][i], "p_{i}{j}^{k} at r={r} n={n}");
                    }
                    assert_eq!(t[i].iter().sum::<i64>(), val[i], "row {i} of p^{k}");
                }
            }
        }
    }

    #[test]
    fn eigenmatrix_shape() {
        let em = Eigenmatrices::new(5, 2).unwrap();
        assert_eq!(em.c[3][0], int(12));
        for j in 0..6 {
            assert_eq!(em.c[0][j], int(1));
            assert_eq!(em.d[0][j], rational::frac(1, 40));
        }
        assert!(is_identity(&Eigenmatrices::new(4, 3).unwrap().product_cd()));
    }

    #[test]
    fn first_column_of_c_is_valency() {
        for (r, n) in [(4, 2), (6, 3)] {
            let em = Eigenmatrices::new(r, n).unwrap();
            let val = valencies(r, n).unwrap();
            for i in 0..6 {
                assert_eq!(em.c[i][0], int(val[i]));
            }
        }
    }
}
