//! The smash product T(V)#kGamma: canonical monomials (letter word times
//! group element on the right), polynomial arithmetic, q-commutators, root
//! vectors, and the coproduct/coaction split used throughout.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::cyclo::{Cyclo, Rat};
use crate::error::{Error, Result};
use crate::realization::{Character, GroupElement, Realization};

/// A canonical monomial a_{w_1} ... a_{w_k} g with the group element pushed
/// to the right. Letters are 1-based indices into the generator basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub word: Vec<u8>,
    pub grp: GroupElement,
}

impl Monomial {
    pub fn unit(r: &Realization) -> Self {
        Monomial { word: vec![], grp: r.group.identity() }
    }

    pub fn is_unit(&self) -> bool {
        self.word.is_empty() && self.grp.is_identity()
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    /// Z^theta-degree: letter multiplicities.
    pub fn z_degree(&self, theta: usize) -> Vec<i64> {
        let mut d = vec![0i64; theta];
        for &t in &self.word {
            d[t as usize - 1] += 1;
        }
        d
    }
}

/// Word order: degree first, then letters compared with a_1 > a_2 > ... ;
/// group exponents break remaining ties (they contribute zero length).
pub fn word_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()) {
            match x.cmp(y) {
                Ordering::Less => return Ordering::Greater, // smaller index = bigger letter
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {}
            }
        }
        Ordering::Equal
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        word_cmp(&self.word, &other.word).then_with(|| self.grp.cmp(&other.grp))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.word.iter().map(|t| format!("a{t}")).collect();
        write!(f, "{}", w.join("."))?;
        if !self.grp.is_identity() {
            if !self.word.is_empty() {
                write!(f, ".")?;
            }
            let e: Vec<String> = self.grp.exps.iter().map(|x| x.to_string()).collect();
            write!(f, "g({})", e.join(","))?;
        } else if self.word.is_empty() {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// (scalar, monomial) product of two canonical monomials: the left group
/// element commutes through the right word picking up character values.
pub fn mono_mul(r: &Realization, a: &Monomial, b: &Monomial) -> (Cyclo, Monomial) {
    let mut scalar = Cyclo::one(r.m);
    if !a.grp.is_identity() && !b.word.is_empty() {
        for &t in &b.word {
            scalar = scalar.mul(&r.chi_eval(t as usize, &a.grp));
        }
    }
    let mut word = a.word.clone();
    word.extend_from_slice(&b.word);
    let grp = r.group.mul(&a.grp, &b.grp);
    (scalar, Monomial { word, grp })
}

/// An element of T(V)#kGamma: finite map from canonical monomials to scalars.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NcPoly {
    pub terms: BTreeMap<Monomial, Cyclo>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn one(r: &Realization) -> Self {
        Self::from_mono(Monomial::unit(r), Cyclo::one(r.m))
    }

    pub fn scalar(r: &Realization, c: Cyclo) -> Self {
        Self::from_mono(Monomial::unit(r), c)
    }

    pub fn letter(r: &Realization, i: usize) -> Self {
        assert!(i >= 1 && i <= r.theta, "letter index out of range");
        Self::from_mono(
            Monomial { word: vec![i as u8], grp: r.group.identity() },
            Cyclo::one(r.m),
        )
    }

    pub fn group_elem(r: &Realization, g: GroupElement) -> Self {
        Self::from_mono(Monomial { word: vec![], grp: g }, Cyclo::one(r.m))
    }

    pub fn from_mono(m: Monomial, c: Cyclo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        NcPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &Cyclo) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect() }
    }

    pub fn scale_rat(&self, rat: &Rat) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.scale(rat))).collect() }
    }

    pub fn mul(&self, other: &NcPoly, r: &Realization) -> NcPoly {
        let mut out = NcPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (s, m) = mono_mul(r, ma, mb);
                out.add_term(m, ca.mul(cb).mul(&s));
            }
        }
        out
    }

    /// Right-multiply by a group element (no character twist arises).
    pub fn mul_group_right(&self, g: &GroupElement, r: &Realization) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (Monomial { word: m.word.clone(), grp: r.group.mul(&m.grp, g) }, c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: usize, r: &Realization) -> NcPoly {
        let mut acc = NcPoly::one(r);
        for _ in 0..n {
            acc = acc.mul(self, r);
        }
        acc
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Cyclo)> {
        self.terms.iter().next_back()
    }

    /// All monomials share one Z^theta degree.
    pub fn z_homogeneous_degree(&self, theta: usize) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.z_degree(theta);
        for m in it {
            if m.z_degree(theta) != first {
                return None;
            }
        }
        Some(first)
    }

    /// YD-bidegree: common (group-degree, character-weight) of all monomials,
    /// where a monomial a_w g has group-degree g_w * g and weight chi_w.
    pub fn bidegree(&self, r: &Realization) -> Result<(GroupElement, Character)> {
        let mut iter = self.terms.keys();
        let first = match iter.next() {
            Some(m) => m,
            None => {
                return Err(Error::NonBihomogeneous("zero polynomial has no bidegree".into()))
            }
        };
        let bid = |m: &Monomial| -> (GroupElement, Character) {
            let mut g = m.grp.clone();
            for &t in &m.word {
                g = r.group.mul(&r.g[t as usize - 1], &g);
            }
            let gens = r.group.num_gens();
            let mut values = vec![Cyclo::one(r.m); gens];
            for &t in &m.word {
                for (v, w) in values.iter_mut().zip(&r.chi[t as usize - 1].values) {
                    *v = v.mul(w);
                }
            }
            (g, Character::new(r.m, values))
        };
        let (g0, w0) = bid(first);
        for m in iter {
            let (g, w) = bid(m);
            if g != g0 || !r.char_eq(&w, &w0) {
                return Err(Error::NonBihomogeneous(format!(
                    "monomials {:?} and {:?} differ in bidegree",
                    first, m
                )));
            }
        }
        Ok((g0, w0))
    }
}

/// Braided commutator [u, v]_c = uv - q vu with q = (weight of v)(group-degree of u).
pub fn q_commutator(r: &Realization, u: &NcPoly, v: &NcPoly) -> Result<NcPoly> {
    if u.is_zero() || v.is_zero() {
        return Ok(NcPoly::zero());
    }
    let (gu, _) = u.bidegree(r)?;
    let (_, wv) = v.bidegree(r)?;
    let q = r.char_eval(&wv, &gu);
    Ok(u.mul(v, r).sub(&v.mul(u, r).scale(&q)))
}

/// Root vector x_(i j) = [x_i, x_(i+1 j)]_c, with x_(i i) = x_i.
pub fn root_vector(r: &Realization, i: usize, j: usize) -> Result<NcPoly> {
    if i > j || i < 1 || j > r.theta {
        return Err(Error::IndexOutOfRange(format!("root vector ({i},{j})")));
    }
    let mut acc = NcPoly::letter(r, j);
    for k in (i..j).rev() {
        acc = q_commutator(r, &NcPoly::letter(r, k), &acc)?;
    }
    Ok(acc)
}

/// x_{i_1,...,i_k} = [x_{i_1}, [x_{i_2...i_k}]_c]_c.
pub fn iterated_bracket(r: &Realization, indices: &[usize]) -> Result<NcPoly> {
    match indices {
        [] => Err(Error::IndexOutOfRange("empty bracket".into())),
        [i] => Ok(NcPoly::letter(r, *i)),
        [i, rest @ ..] => {
            let inner = iterated_bracket(r, rest)?;
            q_commutator(r, &NcPoly::letter(r, *i), &inner)
        }
    }
}

/// Substitute letters by polynomials (group elements fixed); the images must
/// share the YD-pair of the letter they replace for this to be an algebra map.
pub fn subst_letters(r: &Realization, p: &NcPoly, images: &[NcPoly]) -> NcPoly {
    let mut out = NcPoly::zero();
    for (m, c) in &p.terms {
        let mut acc = NcPoly::from_mono(Monomial::unit(r), c.clone());
        for &t in &m.word {
            acc = acc.mul(&images[t as usize - 1], r);
        }
        acc = acc.mul(&NcPoly::group_elem(r, m.grp.clone()), r);
        for (m2, c2) in acc.terms {
            out.add_term(m2, c2);
        }
    }
    out
}

/// An element of the tensor square; components multiply independently.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorPoly {
    pub terms: BTreeMap<(Monomial, Monomial), Cyclo>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly { terms: BTreeMap::new() }
    }

    pub fn one(r: &Realization) -> Self {
        Self::from_pair(Monomial::unit(r), Monomial::unit(r), Cyclo::one(r.m))
    }

    pub fn from_pair(l: Monomial, rt: Monomial, c: Cyclo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((l, rt), c);
        }
        TensorPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, l: Monomial, rt: Monomial, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((l, rt)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for ((l, rt), c) in &other.terms {
            out.add_term(l.clone(), rt.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for ((l, rt), c) in &other.terms {
            out.add_term(l.clone(), rt.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Cyclo) -> TensorPoly {
        if c.is_zero() {
            return TensorPoly::zero();
        }
        TensorPoly {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &TensorPoly, r: &Realization) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                let (sl, l) = mono_mul(r, la, lb);
                let (sr, rt) = mono_mul(r, ra, rb);
                out.add_term(l, rt, ca.mul(cb).mul(&sl).mul(&sr));
            }
        }
        out
    }

    pub fn pow(&self, n: usize, r: &Realization) -> TensorPoly {
        let mut acc = TensorPoly::one(r);
        for _ in 0..n {
            acc = acc.mul(self, r);
        }
        acc
    }

    /// Sum of left components whose right component is the unit monomial;
    /// errors if any other right component remains.
    pub fn strip_right_unit(&self, r: &Realization) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for ((l, rt), c) in &self.terms {
            if rt.is_unit() {
                out.add_term(l.clone(), c.clone());
            } else {
                return Err(Error::OracleResidue(format!("{rt:?}")));
            }
        }
        let _ = r;
        Ok(out)
    }

    /// Apply an NcPoly -> NcPoly map to every left component.
    pub fn map_left(&self, mut f: impl FnMut(&NcPoly) -> NcPoly, r: &Realization) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((l, rt), c) in &self.terms {
            let lp = f(&NcPoly::from_mono(l.clone(), Cyclo::one(r.m)));
            for (m2, c2) in lp.terms {
                out.add_term(m2, rt.clone(), c.mul(&c2));
            }
        }
        out
    }

    /// Apply an NcPoly -> NcPoly map to every right component.
    pub fn map_right(&self, mut f: impl FnMut(&NcPoly) -> NcPoly, r: &Realization) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((l, rt), c) in &self.terms {
            let rp = f(&NcPoly::from_mono(rt.clone(), Cyclo::one(r.m)));
            for (m2, c2) in rp.terms {
                out.add_term(l.clone(), m2, c.mul(&c2));
            }
        }
        out
    }
}

/// Express `target` as an exact linear combination of `basis` polynomials
/// (all in the same normal form), by Gaussian elimination over the field.
/// Returns the coefficients, or None when target is outside the span.
pub fn express_in_span(m: u32, target: &NcPoly, basis: &[NcPoly]) -> Option<Vec<Cyclo>> {
    let mut cols: BTreeMap<Monomial, usize> = BTreeMap::new();
    for b in basis {
        for mono in b.terms.keys() {
            let next = cols.len();
            cols.entry(mono.clone()).or_insert(next);
        }
    }
    for mono in target.terms.keys() {
        if !cols.contains_key(mono) {
            return None; // a monomial of the target no basis element hits
        }
    }
    let nrows = cols.len();
    let ncols = basis.len();
    let mut mat = vec![vec![Cyclo::zero(m); ncols + 1]; nrows];
    for (j, b) in basis.iter().enumerate() {
        for (mono, c) in &b.terms {
            mat[cols[mono]][j] = c.clone();
        }
    }
    for (mono, c) in &target.terms {
        mat[cols[mono]][ncols] = c.clone();
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let piv = match (row..nrows).find(|&i| !mat[i][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        mat.swap(row, piv);
        let inv = mat[row][col].inv().expect("pivot is nonzero");
        for k in col..=ncols {
            mat[row][k] = mat[row][k].mul(&inv);
        }
        for i in 0..nrows {
            if i != row && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for k in col..=ncols {
                    let t = mat[row][k].mul(&f);
                    mat[i][k] = mat[i][k].sub(&t);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if (row..nrows).any(|i| !mat[i][ncols].is_zero()) {
        return None;
    }
    let mut sol = vec![Cyclo::zero(m); ncols];
    for &(rr, cc) in &pivots {
        sol[cc] = mat[rr][ncols].clone();
    }
    Some(sol)
}

/// The structural split shared by the coproduct and both coactions:
/// letters map to letter (x) 1 + g_letter (x) letter and group elements to
/// g (x) g, extended as an algebra map into the tensor square.
pub fn split_coaction(r: &Realization, p: &NcPoly) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for (m, c) in &p.terms {
        let mut acc = TensorPoly::from_pair(
            Monomial::unit(r),
            Monomial::unit(r),
            c.clone(),
        );
        for &t in &m.word {
            let letter = Monomial { word: vec![t], grp: r.group.identity() };
            let glet = Monomial { word: vec![], grp: r.g[t as usize - 1].clone() };
            let mut img = TensorPoly::from_pair(letter.clone(), Monomial::unit(r), Cyclo::one(r.m));
            img.add_term(glet, letter, Cyclo::one(r.m));
            acc = acc.mul(&img, r);
        }
        if !m.grp.is_identity() {
            let gg = TensorPoly::from_pair(
                Monomial { word: vec![], grp: m.grp.clone() },
                Monomial { word: vec![], grp: m.grp.clone() },
                Cyclo::one(r.m),
            );
            acc = acc.mul(&gg, r);
        }
        out = out.add(&acc);
    }
    out
}

/// Triple tensor, used for the coassociativity check.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Tensor3 {
    pub terms: BTreeMap<(Monomial, Monomial, Monomial), Cyclo>,
}

impl Tensor3 {
    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: Monomial, v: Cyclo) {
        if v.is_zero() {
            return;
        }
        match self.terms.entry((a, b, c)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&v);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

/// (Delta (x) id) applied to a tensor square element.
pub fn coproduct_left(r: &Realization, t: &TensorPoly) -> Tensor3 {
    let mut out = Tensor3::default();
    for ((l, rt), c) in &t.terms {
        let dl = split_coaction(r, &NcPoly::from_mono(l.clone(), Cyclo::one(r.m)));
        for ((a, b), v) in dl.terms {
            out.add_term(a, b, rt.clone(), c.mul(&v));
        }
    }
    out
}

/// (id (x) Delta) applied to a tensor square element.
pub fn coproduct_right(r: &Realization, t: &TensorPoly) -> Tensor3 {
    let mut out = Tensor3::default();
    for ((l, rt), c) in &t.terms {
        let dr = split_coaction(r, &NcPoly::from_mono(rt.clone(), Cyclo::one(r.m)));
        for ((b, cc), v) in dr.terms {
            out.add_term(l.clone(), b, cc, c.mul(&v));
        }
    }
    out
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_poly(self))
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, rt), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{l:?} (x) {rt:?}")?;
            first = false;
        }
        Ok(())
    }
}

/// Canonical printer: terms in descending monomial order,
/// "(coeff)*a1.a2.g(1,0,-1)" per term.
pub fn print_poly(p: &NcPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (m, c) in p.terms.iter().rev() {
        let mono = format!("{m:?}");
        if c.is_one() {
            parts.push(mono);
        } else if m.is_unit() {
            parts.push(format!("({c})"));
        } else {
            parts.push(format!("({c})*{mono}"));
        }
    }
    parts.join(" + ")
}

/// Exact parser for the printer output (plus minor whitespace freedom).
pub fn parse_poly(r: &Realization, s: &str) -> Result<NcPoly> {
    let mut out = NcPoly::zero();
    // split top-level terms on '+' / '-' outside parentheses
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            '+' if depth == 0 => {
                if !cur.trim().is_empty() {
                    terms.push((neg, cur.clone()));
                }
                cur.clear();
                neg = false;
            }
            '-' if depth == 0 && cur.trim().is_empty() => {
                neg = !neg;
            }
            '-' if depth == 0 => {
                terms.push((neg, cur.clone()));
                cur.clear();
                neg = true;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    }
    for (negate, term) in terms {
        let t = term.trim();
        let (coeff, rest) = parse_coeff(r, t)?;
        let mono = parse_mono(r, rest.trim())?;
        let c = if negate { coeff.neg() } else { coeff };
        out.add_term(mono, c);
    }
    Ok(out)
}

fn parse_coeff<'a>(r: &Realization, t: &'a str) -> Result<(Cyclo, &'a str)> {
    if let Some(stripped) = t.strip_prefix('(') {
        let close = find_close(stripped)
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{t}`")))?;
        let c = Cyclo::parse(r.m, &stripped[..close])?;
        let rest = stripped[close + 1..].trim().trim_start_matches('*');
        return Ok((c, rest));
    }
    // optional bare rational coefficient before '*'
    let head: String = t
        .chars()
        .take_while(|c| c.is_ascii_digit() || *c == '/' || *c == '-')
        .collect();
    if !head.is_empty() && t[head.len()..].trim_start().starts_with('*') {
        let c = Cyclo::parse(r.m, &head)?;
        let rest = t[head.len()..].trim_start();
        return Ok((c, rest.trim_start_matches('*')));
    }
    if !head.is_empty() && t[head.len()..].trim().is_empty() {
        return Ok((Cyclo::parse(r.m, &head)?, ""));
    }
    Ok((Cyclo::one(r.m), t))
}

fn find_close(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

fn parse_mono(r: &Realization, s: &str) -> Result<Monomial> {
    let mut word = Vec::new();
    let mut grp = r.group.identity();
    if s.is_empty() || s == "1" {
        return Ok(Monomial { word, grp });
    }
    for factor in split_factors(s) {
        let f = factor.trim();
        if let Some(ix) = f.strip_prefix('a') {
            let idx: usize =
                ix.parse().map_err(|e| Error::Parse(format!("bad letter `{f}`: {e}")))?;
            if idx < 1 || idx > r.theta {
                return Err(Error::IndexOutOfRange(format!("letter a{idx}")));
            }
            word.push(idx as u8);
        } else if let Some(rest) = f.strip_prefix("g(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("bad group factor `{f}`")))?;
            let exps = inner
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("bad group exponent: {e}")))?;
            if exps.len() != r.group.num_gens() {
                return Err(Error::Parse(format!(
                    "group factor has {} exponents, expected {}",
                    exps.len(),
                    r.group.num_gens()
                )));
            }
            grp = r.group.mul(&grp, &r.group.from_exps(exps));
        } else if f == "1" {
            // unit factor
        } else {
            return Err(Error::Parse(format!("unrecognized factor `{f}`")));
        }
    }
    Ok(Monomial { word, grp })
}

fn split_factors(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            '.' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclo;
    use crate::realization::Realization;

    fn a2_n3() -> Realization {
        let xi = Cyclo::zeta(3, 1);
        Realization::generic(2, 3, vec![vec![xi.clone(), xi.clone()], vec![xi.clone(), xi]])
            .unwrap()
    }

    fn a3_n2() -> Realization {
        let m1 = Cyclo::zeta(2, 1);
        let one = Cyclo::one(2);
        // q_ii = -1, q_{i,i+1} = -1, q_{i+1,i} = 1, rest 1
        let q = vec![
            vec![m1.clone(), m1.clone(), one.clone()],
            vec![one.clone(), m1.clone(), m1.clone()],
            vec![one.clone(), one.clone(), m1.clone()],
        ];
        Realization::generic(3, 2, q).unwrap()
    }

    #[test]
    fn commutation_rule() {
        let r = a2_n3();
        // g_1 * a_2 = q_12 a_2 g_1
        let g1 = NcPoly::group_elem(&r, r.g[0].clone());
        let a2 = NcPoly::letter(&r, 2);
        let p = g1.mul(&a2, &r);
        let (m, c) = p.terms.iter().next().unwrap();
        assert_eq!(m.word, vec![2]);
        assert_eq!(m.grp, r.g[0]);
        assert_eq!(c, r.q(1, 2));
    }

    #[test]
    fn smash_square() {
        let r = a2_n3();
        // (a_1 g_2)(a_1 g_2) = chi_1(g_2) a_1 a_1 g_2^2
        let m = Monomial { word: vec![1], grp: r.g[1].clone() };
        let p = NcPoly::from_mono(m, Cyclo::one(r.m));
        let sq = p.mul(&p, &r);
        let (mono, c) = sq.terms.iter().next().unwrap();
        assert_eq!(mono.word, vec![1, 1]);
        assert_eq!(mono.grp.exps, vec![0, 2]);
        assert_eq!(*c, r.chi_eval(1, &r.g[1]));
    }

    #[test]
    fn root_vectors() {
        let r = a2_n3();
        let x11 = root_vector(&r, 1, 1).unwrap();
        assert_eq!(x11, NcPoly::letter(&r, 1));
        let x12 = root_vector(&r, 1, 2).unwrap();
        // a1 a2 - q_12 a2 a1
        let mut expected = NcPoly::zero();
        expected.add_term(Monomial { word: vec![1, 2], grp: r.group.identity() }, Cyclo::one(r.m));
        expected.add_term(Monomial { word: vec![2, 1], grp: r.group.identity() }, r.q(1, 2).neg());
        assert_eq!(x12, expected);
        assert!(root_vector(&r, 2, 1).is_err());
    }

    #[test]
    fn root_vector_bidegree() {
        let r = a3_n2();
        let x = root_vector(&r, 1, 3).unwrap();
        let (g, w) = x.bidegree(&r).unwrap();
        assert_eq!(g, r.g_range(1, 3));
        assert!(r.char_eq(&w, &r.chi_range(1, 3)));
    }

    #[test]
    fn coproduct_of_letter() {
        let r = a2_n3();
        let d = split_coaction(&r, &NcPoly::letter(&r, 1));
        assert_eq!(d.terms.len(), 2);
        let unit = Monomial::unit(&r);
        let a1 = Monomial { word: vec![1], grp: r.group.identity() };
        let g1 = Monomial { word: vec![], grp: r.g[0].clone() };
        assert!(d.terms.contains_key(&(a1.clone(), unit.clone())));
        assert!(d.terms.contains_key(&(g1, a1)));
    }

    fn rand_word(r: &Realization, state: &mut u64, len: usize) -> NcPoly {
        let mut w = Vec::new();
        for _ in 0..len {
            *state ^= *state << 13;
            *state ^= *state >> 7;
            *state ^= *state << 17;
            w.push((*state % r.theta as u64) as u8 + 1);
        }
        NcPoly::from_mono(Monomial { word: w, grp: r.group.identity() }, Cyclo::one(r.m))
    }

    #[test]
    fn associativity_random() {
        let r = a3_n2();
        let mut st = 0xabcdef12345u64;
        for _ in 0..100 {
            let a = rand_word(&r, &mut st, 2);
            let b = rand_word(&r, &mut st, 3);
            let c = rand_word(&r, &mut st, 2);
            assert_eq!(a.mul(&b, &r).mul(&c, &r), a.mul(&b.mul(&c, &r), &r));
        }
    }

    #[test]
    fn q_jacobi_and_derivation() {
        let r = a3_n2();
        let mut st = 0x12345u64;
        for _ in 0..50 {
            let x = rand_word(&r, &mut st, 2);
            let y = rand_word(&r, &mut st, 2);
            let z = rand_word(&r, &mut st, 2);
            let q = |u: &NcPoly, v: &NcPoly| {
                let du = u.z_homogeneous_degree(r.theta).unwrap();
                let dv = v.z_homogeneous_degree(r.theta).unwrap();
                r.q_form(&du, &dv)
            };
            // q-Jacobi
            let lhs = q_commutator(&r, &q_commutator(&r, &x, &y).unwrap(), &z).unwrap();
            let rhs = q_commutator(&r, &x, &q_commutator(&r, &y, &z).unwrap())
                .unwrap()
                .add(&q_commutator(&r, &x, &z).unwrap().mul(&y, &r).scale(&q(&y, &z)))
                .sub(&y.mul(&q_commutator(&r, &x, &z).unwrap(), &r).scale(&q(&x, &y)));
            assert_eq!(lhs, rhs);
            // derivation rule
            let lhs2 = q_commutator(&r, &x.mul(&y, &r), &z).unwrap();
            let rhs2 = x
                .mul(&q_commutator(&r, &y, &z).unwrap(), &r)
                .add(&q_commutator(&r, &x, &z).unwrap().mul(&y, &r).scale(&q(&y, &z)));
            assert_eq!(lhs2, rhs2);
        }
    }

    #[test]
    fn coassociativity_small() {
        let r = a2_n3();
        let p = root_vector(&r, 1, 2).unwrap().mul(&NcPoly::letter(&r, 1), &r);
        let d = split_coaction(&r, &p);
        assert_eq!(coproduct_left(&r, &d).terms, coproduct_right(&r, &d).terms);
    }

    #[test]
    fn print_parse_roundtrip() {
        let r = a2_n3();
        let p = root_vector(&r, 1, 2)
            .unwrap()
            .mul(&NcPoly::group_elem(&r, r.g[0].clone()), &r)
            .scale(&Cyclo::zeta(3, 1))
            .add(&NcPoly::scalar(&r, Cyclo::from_int(3, -2)));
        let s = print_poly(&p);
        let p2 = parse_poly(&r, &s).unwrap();
        assert_eq!(p, p2, "round trip failed for `{s}`");
    }

    #[test]
    fn non_bihomogeneous_bracket_rejected() {
        let r = a2_n3();
        let p = NcPoly::letter(&r, 1).add(&NcPoly::letter(&r, 2));
        assert!(q_commutator(&r, &p, &NcPoly::letter(&r, 1)).is_err());
    }
}
