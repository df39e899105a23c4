//! Simply-laced generalized Cartan matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gcm {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

impl Gcm {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let g = Gcm { labels, matrix };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::Gcm("index set must be nonempty".into()));
        }
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Gcm(format!("matrix must be square of size {} (one row and column per label)", n)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &self.labels {
            if !seen.insert(l) {
                return Err(Error::Gcm(format!("labels must be distinct: {:?} repeats", l)));
            }
        }
        for i in 0..n {
            if self.matrix[i][i] != 2 {
                return Err(Error::Gcm(format!("diagonal entry a_{{{0},{0}}} must be 2, found {1}", self.labels[i], self.matrix[i][i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let a = self.matrix[i][j];
                if a != self.matrix[j][i] {
                    return Err(Error::Gcm(format!(
                        "matrix must be symmetric: a_{{{},{}}}={} but a_{{{},{}}}={}",
                        self.labels[i], self.labels[j], a, self.labels[j], self.labels[i], self.matrix[j][i]
                    )));
                }
                if a != 0 && a != -1 {
                    return Err(Error::Gcm(format!(
                        "simply-laced requires off-diagonal entries in {{0,-1}}: a_{{{},{}}}={}",
                        self.labels[i], self.labels[j], a
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn preset(name: &str) -> Option<Gcm> {
        let (labels, m): (Vec<&str>, Vec<Vec<i64>>) = match name {
            "A1" => (vec!["1"], vec![vec![2]]),
            "A2" => (vec!["1", "2"], vec![vec![2, -1], vec![-1, 2]]),
            "D4" => (vec!["1", "2", "3", "4"], vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]]),
            _ => return None,
        };
        Some(Gcm::new(labels.into_iter().map(String::from).collect(), m).expect("presets are valid"))
    }

    pub fn from_json(s: &str) -> Result<Gcm> {
        let g: Gcm = serde_json::from_str(s).map_err(|e| Error::Gcm(format!("malformed GCM JSON: {}", e)))?;
        g.validate()?;
        Ok(g)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    /// Positive definiteness by leading principal minors.
    pub fn is_finite_type(&self) -> bool {
        let n = self.size();
        (1..=n).all(|k| {
            let m: Vec<Vec<crate::scalar::Q>> = (0..k).map(|i| (0..k).map(|j| crate::scalar::q(self.matrix[i][j])).collect()).collect();
            det(m) > crate::scalar::q(0)
        })
    }

    /// Pairs `i != j` with the given entry.
    pub fn pairs_with(&self, a: i64) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.matrix[i][j] == a {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn det(mut m: Vec<Vec<crate::scalar::Q>>) -> crate::scalar::Q {
    use num::{One, Zero};
    let n = m.len();
    let mut d = crate::scalar::Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|r| !m[*r][c].is_zero()) else {
            return crate::scalar::Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}
