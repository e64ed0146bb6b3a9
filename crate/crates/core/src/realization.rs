//! Principal realizations of a Cartan type A braided vector space over an
//! abelian group: the group Gamma, the group-likes g_i, the characters chi_i
//! and the derived braiding matrix q.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::{phi, Cyclo};
use crate::error::{Error, Result};

/// A finitely generated abelian group Z^free_rank x prod Z/torsion[k].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn num_gens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { exps: vec![0; self.num_gens()] }
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        let mut e = self.identity();
        e.exps[k] = 1;
        e
    }

    fn reduce(&self, e: &mut GroupElement) {
        for (k, m) in self.torsion.iter().enumerate() {
            let idx = self.free_rank + k;
            e.exps[idx] = e.exps[idx].rem_euclid(*m as i64);
        }
    }

    pub fn from_exps(&self, exps: Vec<i64>) -> GroupElement {
        let mut e = GroupElement { exps };
        assert_eq!(e.exps.len(), self.num_gens());
        self.reduce(&mut e);
        e
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        self.from_exps(exps)
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        self.from_exps(a.exps.iter().map(|x| -x).collect())
    }

    pub fn pow(&self, a: &GroupElement, n: i64) -> GroupElement {
        self.from_exps(a.exps.iter().map(|x| x * n).collect())
    }
}

/// A group element as an exponent vector over the chosen generators,
/// torsion coordinates reduced.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub exps: Vec<i64>,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{:?}", self.exps)
    }
}

/// A character of the group, given by one nonzero field value per generator.
/// `dlogs[k]` is the discrete log of `values[k]` base zeta_M when the value
/// is a root of unity of order dividing M; evaluation then runs on integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Cyclo>,
    dlogs: Option<Vec<u32>>,
}

impl Character {
    pub fn new(m: u32, values: Vec<Cyclo>) -> Self {
        let dlogs: Option<Vec<u32>> = values
            .iter()
            .map(|v| v.embed(m).ok().and_then(|w| w.as_zeta_power()))
            .collect();
        Character { values, dlogs }
    }

    pub fn trivial(m: u32, num_gens: usize) -> Self {
        Character::new(m, vec![Cyclo::one(m); num_gens])
    }
}

/// A principal realization: rank, root-of-unity order, group data and the
/// YD-pairs (g_i, chi_i) with chi_j(g_i) = q_ij of Cartan type A.
#[derive(Clone, Debug)]
pub struct Realization {
    pub theta: usize,
    pub n: u32,
    pub m: u32,
    pub xi: Cyclo,
    pub group: AbelianGroup,
    pub g: Vec<GroupElement>,
    pub chi: Vec<Character>,
    q: Vec<Vec<Cyclo>>,
    zeta_pows: Vec<Cyclo>,
}

/// On-disk form (UTF-8 JSON) of a realization.
#[derive(Serialize, Deserialize)]
pub struct RealizationFile {
    pub theta: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub group: AbelianGroup,
    pub g: Vec<Vec<i64>>,
    /// chi[j][k] = e with chi_j(generator_k) = zeta_M^e
    pub chi: Vec<Vec<i64>>,
}

impl Realization {
    /// Default generic realization: Gamma = Z^theta free, g_i the i-th basis
    /// element and chi_j(g_i) = q_ij.
    pub fn generic(theta: usize, n: u32, q: Vec<Vec<Cyclo>>) -> Result<Realization> {
        let mut m = n;
        for row in &q {
            for v in row {
                m = num_integer::lcm(m, v.order());
            }
        }
        let group = AbelianGroup::free(theta);
        let g = (0..theta).map(|i| group.generator(i)).collect();
        let chi = (0..theta)
            .map(|j| {
                let values = (0..theta)
                    .map(|i| q[i][j].embed(m))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Character::new(m, values))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(theta, n, m, group, g, chi)
    }

    /// Realization over an arbitrary finitely generated abelian group, with
    /// characters given as zeta_M exponent rows over the group generators.
    pub fn finite(
        theta: usize,
        n: u32,
        m: u32,
        group: AbelianGroup,
        g: Vec<GroupElement>,
        chi_exponents: &[Vec<i64>],
    ) -> Result<Realization> {
        let chi = chi_exponents
            .iter()
            .map(|row| {
                let values = row.iter().map(|&e| Cyclo::zeta(m, e)).collect();
                Character::new(m, values)
            })
            .collect::<Vec<_>>();
        // characters must be well defined on torsion generators
        for (j, ch) in chi.iter().enumerate() {
            for (k, ord) in group.torsion.iter().enumerate() {
                let idx = group.free_rank + k;
                if !ch.values[idx].pow(*ord as i64)?.is_one() {
                    return Err(Error::CharacterIllDefined { j: j + 1, k: idx + 1, order: *ord });
                }
            }
        }
        Self::build(theta, n, m, group, g, chi)
    }

    fn build(
        theta: usize,
        n: u32,
        m: u32,
        group: AbelianGroup,
        g: Vec<GroupElement>,
        chi: Vec<Character>,
    ) -> Result<Realization> {
        if m % n != 0 {
            return Err(Error::Other(format!("ambient order {m} is not a multiple of N={n}")));
        }
        let zeta_pows = (0..m).map(|e| Cyclo::zeta(m, e as i64)).collect();
        let mut real = Realization {
            theta,
            n,
            m,
            xi: Cyclo::zeta(m, (m / n) as i64),
            group,
            g,
            chi,
            q: vec![],
            zeta_pows,
        };
        let mut q = vec![vec![Cyclo::zero(m); theta]; theta];
        for i in 0..theta {
            for j in 0..theta {
                q[i][j] = real.chi_eval(j + 1, &real.g[i]);
            }
        }
        real.q = q;
        real.validate_braiding()?;
        Ok(real)
    }

    fn validate_braiding(&self) -> Result<()> {
        let one = Cyclo::one(self.m);
        let xi_inv = self.xi.inv().unwrap();
        for i in 0..self.theta {
            if self.q[i][i] != self.xi {
                return Err(Error::BraidingPattern {
                    i: i + 1,
                    j: i + 1,
                    detail: format!("q_ii = {} but xi = {}", self.q[i][i], self.xi),
                });
            }
        }
        if !self.xi.pow(self.n as i64)?.is_one()
            || (1..self.n).any(|k| self.xi.pow(k as i64).unwrap().is_one())
        {
            return Err(Error::Other(format!("xi is not a primitive {}-th root of unity", self.n)));
        }
        for i in 0..self.theta {
            for j in (i + 1)..self.theta {
                let prod = self.q[i][j].mul(&self.q[j][i]);
                let expected = if j == i + 1 { &xi_inv } else { &one };
                if &prod != expected {
                    return Err(Error::BraidingPattern {
                        i: i + 1,
                        j: j + 1,
                        detail: format!("q_ij*q_ji = {prod}, expected {expected}"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn q(&self, i: usize, j: usize) -> &Cyclo {
        &self.q[i - 1][j - 1]
    }

    pub fn zeta_pow(&self, e: i64) -> Cyclo {
        self.zeta_pows[e.rem_euclid(self.m as i64) as usize].clone()
    }

    /// chi_j evaluated at a group element (1-based j).
    pub fn chi_eval(&self, j: usize, at: &GroupElement) -> Cyclo {
        self.char_eval(&self.chi[j - 1], at)
    }

    pub fn char_eval(&self, ch: &Character, at: &GroupElement) -> Cyclo {
        if let Some(dl) = &ch.dlogs {
            let mut e: i64 = 0;
            for (k, &x) in at.exps.iter().enumerate() {
                e = (e + (dl[k] as i64 % self.m as i64) * (x % self.m as i64))
                    .rem_euclid(self.m as i64);
            }
            return self.zeta_pow(e);
        }
        let mut acc = Cyclo::one(self.m);
        for (k, &x) in at.exps.iter().enumerate() {
            if x != 0 {
                acc = acc.mul(&ch.values[k].pow(x).unwrap());
            }
        }
        acc
    }

    /// Product character of a word of letters (1-based), evaluated at `at`.
    pub fn chi_word_eval(&self, word: &[usize], at: &GroupElement) -> Cyclo {
        let mut acc = Cyclo::one(self.m);
        for &t in word {
            acc = acc.mul(&self.chi_eval(t, at));
        }
        acc
    }

    /// g_(i j) = g_i g_{i+1} ... g_j, with g_(j i) = 1 for i > j.
    pub fn g_range(&self, i: usize, j: usize) -> GroupElement {
        let mut e = self.group.identity();
        if i <= j {
            for k in i..=j {
                e = self.group.mul(&e, &self.g[k - 1]);
            }
        }
        e
    }

    /// chi_(i j) = chi_i chi_{i+1} ... chi_j, with chi_(j i) = epsilon for i > j.
    pub fn chi_range(&self, i: usize, j: usize) -> Character {
        let gens = self.group.num_gens();
        let mut values = vec![Cyclo::one(self.m); gens];
        if i <= j {
            for k in i..=j {
                for (v, w) in values.iter_mut().zip(&self.chi[k - 1].values) {
                    *v = v.mul(w);
                }
            }
        }
        Character::new(self.m, values)
    }

    /// chi_(i j) evaluated at a group element.
    pub fn chi_range_eval(&self, i: usize, j: usize, at: &GroupElement) -> Cyclo {
        let mut acc = Cyclo::one(self.m);
        if i <= j {
            for k in i..=j {
                acc = acc.mul(&self.chi_eval(k, at));
            }
        }
        acc
    }

    /// The bilinear form chi(alpha, beta) = prod q_ij^(alpha_i beta_j).
    pub fn q_form(&self, alpha: &[i64], beta: &[i64]) -> Cyclo {
        let mut acc = Cyclo::one(self.m);
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                acc = acc.mul(&self.q[i][j].pow(a * b).unwrap());
            }
        }
        acc
    }

    /// The group element of a Z^theta degree: prod g_i^(alpha_i).
    pub fn g_of_degree(&self, alpha: &[i64]) -> GroupElement {
        let mut e = self.group.identity();
        for (i, &a) in alpha.iter().enumerate() {
            if a != 0 {
                e = self.group.mul(&e, &self.group.pow(&self.g[i], a));
            }
        }
        e
    }

    /// Decide chi^n = epsilon, checking on all group generators.
    pub fn char_power_trivial(&self, ch: &Character, n: i64) -> bool {
        ch.values.iter().all(|v| v.pow(n).unwrap().is_one())
    }

    /// Decide g^n = 1 exactly.
    pub fn elem_power_trivial(&self, g: &GroupElement, n: i64) -> bool {
        self.group.pow(g, n).is_identity()
    }

    /// Two characters agree as functions on the group.
    pub fn char_eq(&self, a: &Character, b: &Character) -> bool {
        a.values
            .iter()
            .zip(&b.values)
            .all(|(x, y)| x.embed(self.m).unwrap() == y.embed(self.m).unwrap())
    }

    pub fn to_file(&self) -> RealizationFile {
        RealizationFile {
            theta: self.theta,
            n: self.n,
            m: self.m,
            group: self.group.clone(),
            g: self.g.iter().map(|e| e.exps.clone()).collect(),
            chi: self
                .chi
                .iter()
                .map(|ch| {
                    ch.dlogs
                        .clone()
                        .expect("realization characters store root-of-unity values")
                        .into_iter()
                        .map(|d| d as i64)
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_file(f: &RealizationFile) -> Result<Realization> {
        let g = f.g.iter().map(|row| f.group.from_exps(row.clone())).collect();
        Self::finite(f.theta, f.n, f.m, f.group.clone(), g, &f.chi)
    }

    pub fn from_json(s: &str) -> Result<Realization> {
        let file: RealizationFile = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("realization json: {e}")))?;
        Self::from_file(&file)
    }
}

/// phi is re-exported for sizing coefficient vectors externally.
pub fn power_basis_len(m: u32) -> usize {
    phi(m) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2_n3_generic() -> Realization {
        let xi = Cyclo::zeta(3, 1);
        let q = vec![vec![xi.clone(), xi.clone()], vec![xi.clone(), xi.clone()]];
        Realization::generic(2, 3, q).unwrap()
    }

    #[test]
    fn generic_a2_q_pattern() {
        let r = a2_n3_generic();
        assert_eq!(r.q(1, 1), &r.xi);
        let prod = r.q(1, 2).mul(r.q(2, 1));
        assert_eq!(prod, r.xi.inv().unwrap());
    }

    #[test]
    fn generic_rejects_bad_adjacency() {
        let xi = Cyclo::zeta(3, 1);
        let one = Cyclo::one(3);
        let q = vec![vec![xi.clone(), one.clone()], vec![one, xi]];
        match Realization::generic(2, 3, q) {
            Err(Error::BraidingPattern { i: 1, j: 2, .. }) => {}
            other => panic!("expected braiding error at (1,2), got {other:?}"),
        }
    }

    #[test]
    fn ranges_and_form() {
        let r = a2_n3_generic();
        assert!(r.g_range(2, 1).is_identity());
        let g13 = r.g_range(1, 2);
        assert_eq!(g13.exps, vec![1, 1]);
        // chi_(1 2)(g_1) = q_11 q_12
        let v = r.chi_range_eval(1, 2, &r.g[0]);
        assert_eq!(v, r.q(1, 1).mul(r.q(1, 2)));
        // q_form(alpha_1, alpha_1) = xi
        assert_eq!(r.q_form(&[1, 0], &[1, 0]), r.xi);
        // bilinearity: q_form(a1+a2, a1) = q_11 q_21
        assert_eq!(r.q_form(&[1, 1], &[1, 0]), r.q(1, 1).mul(r.q(2, 1)));
        assert!(r.q_form(&[0, 0], &[5, -3]).is_one());
    }

    #[test]
    fn power_trivial_checks() {
        let r = a2_n3_generic();
        // free group: g_(kl)^N never 1
        assert!(!r.elem_power_trivial(&r.g_range(1, 2), 3));
        // chi_112 = epsilon on this instance
        let mut ch = r.chi_range(1, 1);
        ch = Character::new(r.m, ch.values.iter().zip(&r.chi_range(1, 2).values).map(|(a, b)| a.mul(b)).collect());
        assert!(r.char_power_trivial(&ch, 1));
    }

    #[test]
    fn torsion_character_validation() {
        // torsion order 2 with a value of order 3 must be rejected
        let group = AbelianGroup { free_rank: 0, torsion: vec![2, 2] };
        let g = vec![group.generator(0), group.generator(1)];
        let res = Realization::finite(2, 3, 3, group, g, &[vec![1, 0], vec![0, 1]]);
        assert!(matches!(res, Err(Error::CharacterIllDefined { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let r = a2_n3_generic();
        let j = serde_json::to_string(&r.to_file()).unwrap();
        let r2 = Realization::from_json(&j).unwrap();
        assert_eq!(r2.theta, 2);
        assert_eq!(r2.q(1, 2), r.q(1, 2));
    }
}
