//! Buchberger's algorithm and the quasi-smoothness certificates built on it.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{subsets_of_size, ToricModel};
use crate::ring::{Monomial, MonomialOrder, Polynomial, Rational};

/// Reduced, monic Gröbner basis sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(Polynomial::is_constant)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| leading(g, self.order).0).collect()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, self).is_zero()
    }
}

fn leading(p: &Polynomial, order: MonomialOrder) -> (Monomial, Rational) {
    let (m, c) = p.leading_term(order).expect("nonzero polynomial");
    (m.clone(), c.clone())
}

fn reduce(f: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = divisors.iter().map(|g| leading(g, order)).collect();
    let mut rest = f.clone();
    let mut remainder = Polynomial::zero(f.nvars());
    while let Some((m, c)) = rest.pop_leading(order) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, lc) = &leads[i];
                let q = lm.quotient_of(&m);
                let k = &c / lc;
                // the leading term cancels against the popped one
                let mut tail = divisors[i].clone();
                tail.pop_leading(order);
                rest.sub_shifted(&tail, &q, &k);
            }
            None => remainder.add_term(m, c),
        }
    }
    remainder
}

/// Remainder of `f` on division by the basis; zero iff `f` is in the ideal.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    assert_eq!(f.nvars(), gb.nvars, "variable counts must agree");
    reduce(f, &gb.generators, gb.order)
}

fn lcm_key(a: &Monomial, order: MonomialOrder) -> (u64, Monomial) {
    match order {
        MonomialOrder::Grevlex => (a.total_degree(), a.clone()),
        MonomialOrder::Lex => (0, a.clone()),
    }
}

/// Reduced Gröbner basis. Pairs are processed by the normal strategy
/// (smallest lcm, then lowest index pair) with the product and chain
/// criteria; zero inputs are ignored.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> GroebnerBasis {
    let nvars = gens.first().map_or(0, Polynomial::nvars);
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        assert_eq!(g.nvars(), nvars, "variable counts must agree");
        let r = reduce(g, &basis, order);
        if !r.is_zero() {
            basis.push(r.monic(order));
        }
    }
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    let push_pairs = |basis: &Vec<Polynomial>, new: usize, pairs: &mut BTreeSet<(u64, usize, usize)>| {
        let ln = leading(&basis[new], order).0;
        for i in 0..new {
            let li = leading(&basis[i], order).0;
            let (deg, _) = lcm_key(&li.lcm(&ln), order);
            pairs.insert((deg, i, new));
        }
    };
    for k in 0..basis.len() {
        push_pairs(&basis, k, &mut pairs);
    }
    while let Some(&(deg, i, j)) = pairs.iter().next() {
        pairs.remove(&(deg, i, j));
        done.insert((i, j));
        let (li, ci) = leading(&basis[i], order);
        let (lj, cj) = leading(&basis[j], order);
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leading(&basis[k], order).0.divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mut s = basis[i].mul_term(&li.quotient_of(&l), &ci.recip());
        s.sub_shifted(&basis[j], &lj.quotient_of(&l), &cj.recip());
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        basis.push(r.monic(order));
        let new = basis.len() - 1;
        push_pairs(&basis, new, &mut pairs);
    }
    GroebnerBasis { nvars, order, generators: interreduce(basis, order) }
}

fn interreduce(basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    let leads: Vec<Monomial> = basis.iter().map(|g| leading(g, order).0).collect();
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(j, lj)| {
            j != i && lj.divides(&leads[i]) && (lj != &leads[i] || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let (lm, lc) = leading(&minimal[i], order);
        let mut tail = minimal[i].clone();
        tail.pop_leading(order);
        let mut r = reduce(&tail, &others, order);
        r.add_term(lm, lc);
        reduced.push(r.monic(order));
    }
    reduced.sort_by(|a, b| order.cmp(&leading(a, order).0, &leading(b, order).0));
    reduced
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealDimension {
    /// `1` is in the ideal.
    EmptyVariety,
    Dimension(usize),
}

/// Krull dimension: the largest set of variables containing the support of
/// no leading monomial.
pub fn ideal_dimension(gb: &GroebnerBasis) -> IdealDimension {
    if gb.is_unit_ideal() {
        return IdealDimension::EmptyVariety;
    }
    let leads: Vec<BTreeSet<usize>> = gb.leading_monomials().iter().map(|m| m.support().collect()).collect();
    let vars: Vec<usize> = (0..gb.nvars).collect();
    for size in (0..=gb.nvars).rev() {
        for s in subsets_of_size(&vars, size) {
            if leads.iter().all(|l| !l.iter().all(|v| s.contains(v))) {
                return IdealDimension::Dimension(size);
            }
        }
    }
    IdealDimension::Dimension(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub state: TriState,
    pub reason: String,
    /// A 0/1 point exhibiting a negative answer, when one was found.
    pub witness: Option<Vec<u32>>,
}

impl Certificate {
    fn new(state: TriState, reason: impl Into<String>) -> Self {
        Certificate { state, reason: reason.into(), witness: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsequenceCheck {
    pub regular: bool,
    pub reason: String,
}

/// Whether the selected partials of `f` cut out codimension equal to their
/// number (for quasi-homogeneous partials this is regularity).
pub fn regular_subsequence_check(f: &Polynomial, indices: &[usize]) -> SubsequenceCheck {
    let n = f.nvars();
    let mut partials = Vec::new();
    for &j in indices {
        let Ok(d) = f.derivative(j) else {
            return SubsequenceCheck { regular: false, reason: format!("variable index {j} out of range") };
        };
        if d.is_zero() {
            return SubsequenceCheck { regular: false, reason: format!("partial derivative {} vanishes identically", j + 1) };
        }
        partials.push(d);
    }
    let gb = buchberger(&partials, MonomialOrder::Grevlex);
    match ideal_dimension(&gb) {
        IdealDimension::EmptyVariety => SubsequenceCheck { regular: false, reason: "the partials generate the unit ideal".into() },
        IdealDimension::Dimension(d) => {
            let k = indices.len();
            let regular = d + k == n;
            let reason = format!("codimension {} for {} partials", n - d, k);
            SubsequenceCheck { regular, reason }
        }
    }
}

/// Default bound on the power tests: twice the total degree of `f`.
pub fn default_power_cap(f: &Polynomial) -> u32 {
    u32::try_from(2 * f.total_degree().unwrap_or(1)).unwrap_or(u32::MAX).max(1)
}

/// Decides whether the common zero set of `gens` is the origin alone.
pub fn only_origin_check(gens: &[Polynomial], model: &ToricModel, cap: u32) -> Certificate {
    let gb = buchberger(gens, MonomialOrder::Grevlex);
    match ideal_dimension(&gb) {
        IdealDimension::EmptyVariety => Certificate::new(TriState::Yes, "the ideal is the unit ideal"),
        IdealDimension::Dimension(d) if d > 0 => {
            Certificate::new(TriState::No, format!("zero set has dimension {d}"))
        }
        IdealDimension::Dimension(_) => {
            if model.grading().positivity().is_some() {
                return Certificate::new(
                    TriState::Yes,
                    "zero-dimensional cone under a positive combination of radial fields",
                );
            }
            let n = gb.nvars();
            for j in 0..n {
                let z = Polynomial::var(n, j);
                if !(1..=cap).any(|e| gb.contains(&z.pow(e))) {
                    return Certificate::new(
                        TriState::Inconclusive,
                        format!("no power of {} up to {} lies in the ideal", model.variable_names()[j], cap),
                    );
                }
            }
            Certificate::new(TriState::Yes, "every variable has a power in the ideal")
        }
    }
}

/// Partial derivatives of `f` together with `f` itself.
pub fn jacobian_ideal(f: &Polynomial) -> Vec<Polynomial> {
    let mut gens = f.gradient();
    gens.push(f.clone());
    gens.retain(|g| !g.is_zero());
    gens
}

/// Whether the singular locus of `{f = 0}` lies inside the irrelevant set.
pub fn sing_inside_irrelevant(f: &Polynomial, model: &ToricModel, cap: u32) -> Certificate {
    let irrelevant = match model.irrelevant_ideal() {
        Ok(z) => z,
        Err(e) => return Certificate::new(TriState::Inconclusive, e.to_string()),
    };
    let n = f.nvars();
    let jac = jacobian_ideal(f);
    // a coordinate subspace on which the whole Jacobian ideal vanishes and
    // some irrelevant generator does not
    let vars: Vec<usize> = (0..n).collect();
    for size in (1..=n).rev() {
        for kept in subsets_of_size(&vars, size) {
            let zeroed: Vec<usize> = vars.iter().copied().filter(|v| !kept.contains(v)).collect();
            if jac.iter().all(|g| g.restrict_to_zero(&zeroed).is_zero()) {
                let outside = irrelevant.generators.iter().any(|m| m.support().all(|v| kept.contains(&v)));
                if outside {
                    let point: Vec<u32> = (0..n).map(|v| u32::from(kept.contains(&v))).collect();
                    let names: Vec<&str> = zeroed.iter().map(|&v| model.variable_names()[v].as_str()).collect();
                    return Certificate {
                        state: TriState::No,
                        reason: format!("Sing(V) contains the subspace {{{}}} = 0 outside the irrelevant set", names.join(", ")),
                        witness: Some(point),
                    };
                }
            }
        }
    }
    let gb = buchberger(&jac, MonomialOrder::Grevlex);
    for g in irrelevant.polynomials() {
        if !(1..=cap).any(|e| gb.contains(&g.pow(e))) {
            return Certificate::new(
                TriState::Inconclusive,
                format!("no power of {} up to {} lies in the Jacobian ideal", g.to_string_with(model.variable_names()), cap),
            );
        }
    }
    Certificate::new(TriState::Yes, "every irrelevant generator has a power in the Jacobian ideal")
}

/// Checks `f = sum c_i g_i` has a solution with polynomial `c_i`, used only
/// as an oracle in tests: solved in bounded degree by linear algebra.
#[cfg(test)]
pub(crate) fn combination_exists(f: &Polynomial, gens: &[Polynomial], max_degree: u32) -> bool {
    use crate::linalg::SparseSystem;
    use num_traits::One;
    let n = f.nvars();
    let mut multipliers: Vec<Monomial> = Vec::new();
    let mut exps = vec![0u32; n];
    fn all(n: usize, j: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if j == n {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in 0..=left {
            exps[j] = e;
            all(n, j + 1, left - e, exps, out);
        }
        exps[j] = 0;
    }
    all(n, 0, max_degree, &mut exps, &mut multipliers);
    let mut sys = SparseSystem::new();
    let mut unknown = 0;
    for g in gens {
        for m in &multipliers {
            for (k, c) in g.mul_term(m, &Rational::one()).terms() {
                sys.add(k.clone(), unknown, c.clone());
            }
            unknown += 1;
        }
    }
    for (k, c) in f.terms() {
        sys.set_rhs(k.clone(), c.clone());
    }
    sys.solve(unknown).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_polynomial;

    fn p(text: &str, n: usize) -> Polynomial {
        parse_polynomial(text, &Polynomial::default_names(n)).unwrap()
    }

    #[test]
    fn variables_are_their_own_basis() {
        let gb = buchberger(&[p("z1", 2), p("z2", 2)], MonomialOrder::Grevlex);
        assert_eq!(gb.generators(), &[p("z2", 2), p("z1", 2)]);
        assert_eq!(ideal_dimension(&gb), IdealDimension::Dimension(0));
    }

    #[test]
    fn hand_computed_basis() {
        let gens = [p("z1^2 - z2", 2), p("z2^2", 2)];
        let gb = buchberger(&gens, MonomialOrder::Grevlex);
        assert!(normal_form(&p("z1^4", 2), &gb).is_zero());
        assert_eq!(normal_form(&p("z1", 2), &gb), p("z1", 2));
        assert!(gb.generators().iter().any(|g| g == &p("z2^2", 2)));
        assert!(combination_exists(&p("z1^4", 2), &gens, 2));
        assert!(!combination_exists(&p("z1^3", 2), &gens, 3));
        assert!(!gb.contains(&p("z1^3", 2)));
    }

    #[test]
    fn single_generator_is_made_monic() {
        let gb = buchberger(&[p("3*z1^2 + 6*z2", 2)], MonomialOrder::Grevlex);
        assert_eq!(gb.generators(), &[p("z1^2 + 2*z2", 2)]);
        assert_eq!(normal_form(&p("z1", 2), &buchberger(&[p("z1^2", 2)], MonomialOrder::Grevlex)), p("z1", 2));
    }

    #[test]
    fn lex_elimination() {
        let gb = buchberger(&[p("z1 - z2^2", 2), p("z2^3 - 1", 2)], MonomialOrder::Lex);
        assert!(gb.contains(&p("z1^3 - 1", 2)));
    }

    #[test]
    fn dimensions() {
        let gb = buchberger(&[p("z1", 4), p("z2", 4)], MonomialOrder::Grevlex);
        assert_eq!(ideal_dimension(&gb), IdealDimension::Dimension(2));
        let fermat = p("z1^4 + z2^4 + z3^4", 3);
        let gb = buchberger(&fermat.gradient(), MonomialOrder::Grevlex);
        assert_eq!(ideal_dimension(&gb), IdealDimension::Dimension(0));
        let gb = buchberger(&[p("z1 + 1", 2), p("z1", 2)], MonomialOrder::Grevlex);
        assert_eq!(ideal_dimension(&gb), IdealDimension::EmptyVariety);
    }

    #[test]
    fn regular_subsequences() {
        assert!(regular_subsequence_check(&p("z1^3 + z2^3 + z3^3", 3), &[0, 1, 2]).regular);
        assert!(regular_subsequence_check(&p("z1*z2", 2), &[0, 1]).regular);
        let c = regular_subsequence_check(&p("z1^2", 2), &[1]);
        assert!(!c.regular);
        assert!(c.reason.contains("vanishes"));
        // z1*z2 and z1*z3 share the component z1 = 0
        assert!(!regular_subsequence_check(&p("z1*z2*z3", 3), &[1, 2]).regular);
    }
}
