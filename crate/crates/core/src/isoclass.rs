//! Isomorphism-class machinery: braiding symmetries, the block sets I(i) and
//! the block group, and the parameter actions (scaling, permutation, and the
//! GL_2 action in the rank-two order-3 block case).

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::liftings::{build_presentation, LiftingParams, PresKind};
use crate::realization::Realization;
use crate::smash::{subst_letters, NcPoly};

/// All permutations sigma with q_ij = q_{sigma(i) sigma(j)} (1-based images).
pub fn braiding_symmetries(r: &Realization) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (1..=r.theta).collect();
    loop {
        if perm_preserves_braiding(r, &perm) {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn perm_preserves_braiding(r: &Realization, perm: &[usize]) -> bool {
    for i in 1..=r.theta {
        for j in 1..=r.theta {
            if r.q(i, j) != r.q(perm[i - 1], perm[j - 1]) {
                return false;
            }
        }
    }
    true
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// I(i) = { j : g_j = g_i and chi_j = chi_i }, 1-based.
pub fn block_sets(r: &Realization) -> Vec<Vec<usize>> {
    (1..=r.theta)
        .map(|i| {
            (1..=r.theta)
                .filter(|&j| {
                    r.g[j - 1] == r.g[i - 1] && r.char_eq(&r.chi[j - 1], &r.chi[i - 1])
                })
                .collect()
        })
        .collect()
}

/// The diagram cases with nontrivial blocks that occur in Cartan type A.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionalCase {
    /// all blocks are singletons
    Generic,
    /// rank 3 at order 2 with g_1 = g_3, chi_1 = chi_3
    A3N2Block,
    /// rank 2 at order 3 with g_1 = g_2, chi_1 = chi_2; the block group is GL_2
    A2N3Gl2,
}

pub fn exceptional_case(r: &Realization) -> ExceptionalCase {
    let blocks = block_sets(r);
    if blocks.iter().all(|b| b.len() == 1) {
        return ExceptionalCase::Generic;
    }
    if r.n == 3 && r.theta == 2 && blocks[0].len() == 2 {
        return ExceptionalCase::A2N3Gl2;
    }
    if r.n == 2 && r.theta == 3 && blocks[0].contains(&3) {
        return ExceptionalCase::A3N2Block;
    }
    ExceptionalCase::Generic
}

/// A parameter action: diagonal scaling, a braiding symmetry, or the GL_2
/// action available in the rank-two order-3 block case.
#[derive(Clone, Debug)]
pub enum ParamAction {
    Scale(Vec<Cyclo>),
    Permute(Vec<usize>),
    Gl2([[Cyclo; 2]; 2]),
}

impl ParamAction {
    fn validate(&self, r: &Realization) -> Result<()> {
        match self {
            ParamAction::Scale(s) => {
                if s.len() != r.theta {
                    return Err(Error::InvalidParams("scale tuple has wrong length".into()));
                }
                if s.iter().any(Cyclo::is_zero) {
                    return Err(Error::InvalidParams("scale entries must be nonzero".into()));
                }
                Ok(())
            }
            ParamAction::Permute(p) => {
                let mut sorted = p.clone();
                sorted.sort_unstable();
                if sorted != (1..=r.theta).collect::<Vec<_>>() {
                    return Err(Error::InvalidParams("not a permutation".into()));
                }
                if !perm_preserves_braiding(r, p) {
                    return Err(Error::InvalidParams(
                        "permutation does not preserve the braiding".into(),
                    ));
                }
                Ok(())
            }
            ParamAction::Gl2(s) => {
                if exceptional_case(r) != ExceptionalCase::A2N3Gl2 {
                    return Err(Error::InvalidParams(
                        "the GL2 action needs the rank-two order-3 block case".into(),
                    ));
                }
                let det = s[0][0].mul(&s[1][1]).sub(&s[0][1].mul(&s[1][0]));
                if det.is_zero() {
                    return Err(Error::InvalidParams("GL2 matrix is singular".into()));
                }
                Ok(())
            }
        }
    }
}

/// The Z^theta degree of each deformation parameter.
fn lambda_degree(r: &Realization, i: usize, j: usize) -> Vec<i64> {
    let mut d = vec![0i64; r.theta];
    if r.n == 2 {
        d[i - 1] += 1;
        d[j - 1] += 1;
    } else {
        d[i - 1] += 2;
        d[j - 1] += 1;
    }
    d
}

fn nu_degree(r: &Realization, i: usize) -> Vec<i64> {
    let mut d = vec![0i64; r.theta];
    d[i - 2] += 1;
    d[i - 1] += 2;
    d[i] += 1;
    d
}

fn mu_degree(r: &Realization, k: usize, l: usize) -> Vec<i64> {
    let mut d = vec![0i64; r.theta];
    for t in k..=l {
        d[t - 1] += r.n as i64;
    }
    d
}

fn scale_factor(s: &[Cyclo], deg: &[i64], m: u32) -> Cyclo {
    let mut acc = Cyclo::one(m);
    for (si, &di) in s.iter().zip(deg) {
        if di != 0 {
            acc = acc.mul(&si.pow(di).unwrap());
        }
    }
    acc
}

/// Apply an action to a parameter family; the result again satisfies the
/// admissibility constraints.
pub fn act(r: &Realization, action: &ParamAction, params: &LiftingParams) -> Result<LiftingParams> {
    action.validate(r)?;
    let out = match action {
        ParamAction::Scale(s) => {
            let mut p = LiftingParams::default();
            for (&(i, j), v) in &params.lambda {
                p.lambda.insert((i, j), v.mul(&scale_factor(s, &lambda_degree(r, i, j), r.m)));
            }
            for (&i, v) in &params.nu {
                p.nu.insert(i, v.mul(&scale_factor(s, &nu_degree(r, i), r.m)));
            }
            for (&(k, l), v) in &params.mu {
                p.mu.insert((k, l), v.mul(&scale_factor(s, &mu_degree(r, k, l), r.m)));
            }
            p
        }
        ParamAction::Permute(sigma) => {
            let img = |i: usize| sigma[i - 1];
            let mut p = LiftingParams::default();
            for (&(i, j), v) in &params.lambda {
                let (a, b) = (img(i), img(j));
                let key = if r.n == 2 { (a.min(b), a.max(b)) } else { (a, b) };
                p.lambda.insert(key, v.clone());
            }
            for (&i, v) in &params.nu {
                // relation degree alpha_{i-1} + 2 alpha_i + alpha_{i+1} maps
                // to the relation at the image of i
                p.nu.insert(img(i), v.clone());
            }
            for (&(k, l), v) in &params.mu {
                let mut image: Vec<usize> = (k..=l).map(img).collect();
                image.sort_unstable();
                let contiguous = image.windows(2).all(|w| w[1] == w[0] + 1);
                if !contiguous {
                    return Err(Error::InvalidParams(format!(
                        "permutation does not map the root ({k},{l}) to a root"
                    )));
                }
                p.mu.insert((image[0], *image.last().unwrap()), v.clone());
            }
            p
        }
        ParamAction::Gl2(s) => {
            let m = r.m;
            let zero = Cyclo::zero(m);
            let l112 = params.lambda.get(&(1, 2)).cloned().unwrap_or(zero.clone());
            let l122 = params.lambda.get(&(2, 1)).cloned().unwrap_or(zero.clone());
            let mu1 = params.mu.get(&(1, 1)).cloned().unwrap_or(zero.clone());
            let mu2 = params.mu.get(&(2, 2)).cloned().unwrap_or(zero.clone());
            let mu12 = params.mu.get(&(1, 2)).cloned().unwrap_or(zero.clone());
            let (s11, s12, s21, s22) = (&s[0][0], &s[0][1], &s[1][0], &s[1][1]);
            let c3 = |a: &Cyclo| a.pow(3).unwrap();
            let three = Cyclo::from_int(m, 3);
            let two = Cyclo::from_int(m, 2);
            let mu1_s = c3(s11)
                .mul(&mu1)
                .add(&c3(s12).mul(&mu2))
                .add(&s11.pow(2).unwrap().mul(s12).mul(&l112))
                .add(&s11.mul(&s12.pow(2).unwrap()).mul(&l122));
            let mu2_s = c3(s21)
                .mul(&mu1)
                .add(&c3(s22).mul(&mu2))
                .add(&s21.pow(2).unwrap().mul(s22).mul(&l112))
                .add(&s21.mul(&s22.pow(2).unwrap()).mul(&l122));
            let l112_s = three
                .mul(&s11.pow(2).unwrap())
                .mul(s21)
                .mul(&mu1)
                .add(&three.mul(&s12.pow(2).unwrap()).mul(s22).mul(&mu2))
                .add(
                    &s11.pow(2)
                        .unwrap()
                        .mul(s22)
                        .add(&two.mul(s11).mul(s12).mul(s21))
                        .mul(&l112),
                )
                .add(
                    &two.mul(s11)
                        .mul(s12)
                        .mul(s22)
                        .add(&s12.pow(2).unwrap().mul(s21))
                        .mul(&l122),
                );
            let l122_s = three
                .mul(s11)
                .mul(&s21.pow(2).unwrap())
                .mul(&mu1)
                .add(&three.mul(s12).mul(&s22.pow(2).unwrap()).mul(&mu2))
                .add(
                    &two.mul(s11)
                        .mul(s21)
                        .mul(s22)
                        .add(&s12.mul(&s21.pow(2).unwrap()))
                        .mul(&l112),
                )
                .add(
                    &s11.mul(&s22.pow(2).unwrap())
                        .add(&two.mul(s12).mul(s21).mul(s22))
                        .mul(&l122),
                );
            let det = s11.mul(s22).sub(&s12.mul(s21));
            let mu12_s = c3(&det).mul(&mu12);
            let mut p = LiftingParams::default();
            for (k, v) in [((1, 2), l112_s), ((2, 1), l122_s)] {
                if !v.is_zero() {
                    p.lambda.insert(k, v);
                }
            }
            for (k, v) in [((1, 1), mu1_s), ((2, 2), mu2_s), ((1, 2), mu12_s)] {
                if !v.is_zero() {
                    p.mu.insert(k, v);
                }
            }
            p
        }
    };
    out.validate(r)?;
    Ok(out)
}

/// The generator substitution realizing the action on the algebra:
/// a_i maps to the image polynomial.
pub fn substitution_images(r: &Realization, action: &ParamAction) -> Result<Vec<NcPoly>> {
    action.validate(r)?;
    Ok(match action {
        ParamAction::Scale(s) => (1..=r.theta)
            .map(|i| NcPoly::letter(r, i).scale(&s[i - 1]))
            .collect(),
        ParamAction::Permute(sigma) => {
            (1..=r.theta).map(|i| NcPoly::letter(r, sigma[i - 1])).collect()
        }
        ParamAction::Gl2(s) => vec![
            NcPoly::letter(r, 1).scale(&s[0][0]).add(&NcPoly::letter(r, 2).scale(&s[0][1])),
            NcPoly::letter(r, 1).scale(&s[1][0]).add(&NcPoly::letter(r, 2).scale(&s[1][1])),
        ],
    })
}

/// Substitute-and-reduce equivalence: each defining relation of the lifting
/// at `params`, with generators replaced by the action images, reduces to
/// zero in the completed lifting at `act(params)`. Returns the labels of any
/// relations that fail.
pub fn relation_equivalence(
    r: &Realization,
    action: &ParamAction,
    params: &LiftingParams,
    bound: usize,
) -> Result<Vec<String>> {
    let images = substitution_images(r, action)?;
    let target_params = act(r, action, params)?;
    let target = build_presentation(PresKind::Lifting, r, &target_params)?;
    let mut sys = target.rewrite_system(r)?;
    sys.complete(r, bound)?;
    let source = build_presentation(PresKind::Lifting, r, params)?;
    let mut failures = Vec::new();
    for rel in &source.relations {
        let image = subst_letters(r, &rel.lhs.sub(&rel.rhs), &images);
        if !sys.reduce(r, &image).is_zero() {
            failures.push(rel.label.clone());
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{fixture_a2_n3_bdr, fixture_a3_n2, fixture_a5_n3};

    #[test]
    fn symmetries_contain_identity_and_flip() {
        let inst = fixture_a2_n3_bdr();
        let syms = braiding_symmetries(&inst.real);
        assert!(syms.contains(&vec![1, 2]));
        assert!(syms.contains(&vec![2, 1]), "the all-xi matrix is flip symmetric");
        // brute force is definitionally exhaustive at rank 5
        let big = fixture_a5_n3();
        let syms5 = braiding_symmetries(&big.real);
        assert!(syms5.contains(&(1..=5).collect::<Vec<_>>()));
    }

    #[test]
    fn block_cases() {
        let generic = fixture_a3_n2();
        assert_eq!(exceptional_case(&generic.real), ExceptionalCase::Generic);
        // rank-2 order-3 block instance over Z/9
        let group = crate::realization::AbelianGroup { free_rank: 0, torsion: vec![9] };
        let c = group.generator(0);
        let real = crate::realization::Realization::finite(
            2,
            3,
            9,
            group,
            vec![c.clone(), c],
            &[vec![3], vec![3]],
        )
        .unwrap();
        assert_eq!(exceptional_case(&real), ExceptionalCase::A2N3Gl2);
        assert_eq!(block_sets(&real), vec![vec![1, 2], vec![1, 2]]);
    }

    #[test]
    fn scale_action_is_group_action() {
        let inst = fixture_a3_n2();
        let r = &inst.real;
        let s1: Vec<Cyclo> =
            vec![Cyclo::from_int(r.m, 2), Cyclo::from_int(r.m, -1), Cyclo::from_int(r.m, 3)];
        let s2: Vec<Cyclo> =
            vec![Cyclo::from_int(r.m, -2), Cyclo::from_int(r.m, 5), Cyclo::from_int(r.m, 1)];
        let a1 = ParamAction::Scale(s1.clone());
        let a2 = ParamAction::Scale(s2.clone());
        let prod = ParamAction::Scale(
            s1.iter().zip(&s2).map(|(a, b)| a.mul(b)).collect::<Vec<_>>(),
        );
        let lhs = act(r, &a1, &act(r, &a2, &inst.params).unwrap()).unwrap();
        let rhs = act(r, &prod, &inst.params).unwrap();
        assert_eq!(lhs.to_file().lambda, rhs.to_file().lambda);
        assert_eq!(lhs.to_file().nu, rhs.to_file().nu);
        assert_eq!(lhs.to_file().mu, rhs.to_file().mu);
        // identity action
        let id = ParamAction::Scale(vec![Cyclo::one(r.m); 3]);
        let same = act(r, &id, &inst.params).unwrap();
        assert_eq!(same.to_file().mu, inst.params.to_file().mu);
        // uniform scale c multiplies lambda_r by c^{|deg r|}
        let c = Cyclo::from_int(r.m, 3);
        let uni = ParamAction::Scale(vec![c.clone(); 3]);
        let scaled = act(r, &uni, &inst.params).unwrap();
        let lam = inst.params.lam2(r, 1, 3);
        assert_eq!(scaled.lam2(r, 1, 3), lam.mul(&c.pow(2).unwrap()));
    }

    #[test]
    fn gl2_determinant_cube_on_mu12() {
        let group = crate::realization::AbelianGroup { free_rank: 0, torsion: vec![9] };
        let c = group.generator(0);
        let real = crate::realization::Realization::finite(
            2,
            3,
            9,
            group,
            vec![c.clone(), c],
            &[vec![3], vec![3]],
        )
        .unwrap();
        let m = real.m;
        let mut params = LiftingParams::default();
        params.mu.insert((1, 2), Cyclo::from_int(m, 2));
        let s = [
            [Cyclo::from_int(m, 2), Cyclo::from_int(m, 1)],
            [Cyclo::from_int(m, 1), Cyclo::from_int(m, 1)],
        ];
        let out = act(&real, &ParamAction::Gl2(s), &params).unwrap();
        // det = 1, so mu12 is unchanged
        assert_eq!(out.mu_at(&real, 1, 2), Cyclo::from_int(m, 2));
    }
}
