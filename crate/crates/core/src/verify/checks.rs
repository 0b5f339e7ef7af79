//! Check bodies. Each one returns an [`Outcome`] for a single subject; the
//! first counterexample found ends the check.

use std::collections::BTreeMap;

use crate::builtin::{direct_sum, make_cycle_rep, make_free_infinity_rep, make_standard_rep};
use crate::closedform::{
    classify_case, closed_generator_expr, compare_with_functor, eval_monomial, ClosedFormCase,
    REFERENCE_DISPLAYS,
};
use crate::embedding::apply_embedded;
use crate::error::Result;
use crate::expr::{eval, eval_basis, parse, GenFamily, OperatorExpr};
use crate::functor::{functor_apply, functor_extend, functor_restrict};
use crate::intertwiner::{intertwiner_violation, IntertwinerMap};
use crate::label::{BasisLabel, Scalar, I, ONE};
use crate::rep::{MonomialRep, Signature};
use crate::series::{apply_q, apply_r, strip_classify, StripResult};
use crate::term::{MonomialTerm, VectorSum};

use super::catalog::{basic_reps, catalog, CatalogEntry};
use super::oracle::{contributing_indices, r_by_summation, tail_projection};
use super::{CheckReport, Counterexample, Outcome, Runner, SuiteConfig};

const EMBEDDED_J: usize = 10;
const SHIFTS: [usize; 4] = [0, 1, 2, 3];
const EXPRESSIONS: [&str; 5] = [
    "s1 s2' + i R[1] - 2 Q",
    "U + R[2]",
    "(s1 - i s2)' f[3]",
    "2.5 I - s1 s1' U'",
    "s2 Q s1' + 0.5i R[0]' - 0.5 s2'",
];

/// Comparison context for one subject.
struct Probe {
    subject: String,
    tol: f64,
    samples: usize,
}

impl Probe {
    fn new(subject: impl Into<String>, config: &SuiteConfig) -> Self {
        Probe {
            subject: subject.into(),
            tol: config.tolerance,
            samples: 0,
        }
    }

    fn fail(
        &self,
        label: Option<&BasisLabel>,
        op: String,
        expected: String,
        actual: String,
    ) -> Outcome {
        Outcome::Fail(Counterexample {
            rep: self.subject.clone(),
            label: label.map(|x| x.to_string()),
            generator: Some(op),
            expected,
            actual,
        })
    }

    fn pass(&self) -> Result<Outcome> {
        if self.samples == 0 {
            return Ok(Outcome::Vacuous("empty label space".into()));
        }
        Ok(Outcome::Pass {
            samples: self.samples,
            detail: String::new(),
        })
    }

    fn pass_with(&self, detail: impl Into<String>) -> Result<Outcome> {
        Ok(Outcome::Pass {
            samples: self.samples,
            detail: detail.into(),
        })
    }

    fn near_term(&self, a: &MonomialTerm, b: &MonomialTerm) -> bool {
        match (a, b) {
            (MonomialTerm::Zero, MonomialTerm::Zero) => true,
            (
                MonomialTerm::Basis { phase: p, label: l },
                MonomialTerm::Basis { phase: q, label: m },
            ) => l == m && (p - q).norm() <= self.tol,
            _ => false,
        }
    }

    fn near_sum(&self, a: &VectorSum, b: &VectorSum) -> bool {
        a.iter().all(|(x, c)| (c - b.get(x)).norm() <= self.tol)
            && b.iter().all(|(x, c)| (c - a.get(x)).norm() <= self.tol)
    }
}

macro_rules! ensure_term {
    ($p:expr, $x:expr, $op:expr, $expected:expr, $actual:expr) => {{
        let expected: MonomialTerm = $expected;
        let actual: MonomialTerm = $actual;
        if !$p.near_term(&expected, &actual) {
            return Ok($p.fail(Some($x), $op, expected.to_string(), actual.to_string()));
        }
    }};
}

macro_rules! ensure_sum {
    ($p:expr, $x:expr, $op:expr, $expected:expr, $actual:expr) => {{
        let expected: VectorSum = $expected;
        let actual: VectorSum = $actual;
        if !$p.near_sum(&expected, &actual) {
            return Ok($p.fail(Some($x), $op, expected.to_string(), actual.to_string()));
        }
    }};
}

fn op_name(signature: Signature, generator: usize, adjoint: bool) -> String {
    let letter = if signature == Signature::Infinity {
        't'
    } else {
        's'
    };
    format!("{letter}{generator}{}", if adjoint { "*" } else { "" })
}

fn act(rep: &MonomialRep, generator: usize, adjoint: bool, x: &BasisLabel) -> Result<MonomialTerm> {
    if adjoint {
        rep.apply_adjoint(generator, x)
    } else {
        rep.apply(generator, x)
    }
}

fn on_term<F>(term: &MonomialTerm, op: F) -> Result<MonomialTerm>
where
    F: FnOnce(&BasisLabel) -> Result<MonomialTerm>,
{
    term.clone().then(op)
}

fn sum_of(terms: &[MonomialTerm]) -> VectorSum {
    let mut out = VectorSum::new();
    for t in terms {
        out.add_term(t, ONE);
    }
    out
}

/// Orthogonality and completeness (or the `O_∞` inequality) on `labels`.
fn cuntz_relations(
    p: &mut Probe,
    rep: &MonomialRep,
    labels: &[BasisLabel],
    j_bound: usize,
    orth: bool,
) -> Result<Outcome> {
    let signature = rep.signature();
    let bound = signature.generator_bound(j_bound);
    let probe_bound = match signature {
        Signature::Finite(n) => n.min(8),
        Signature::Infinity => bound,
    };
    for x in labels {
        p.samples += 1;
        if orth {
            for j in 1..=bound {
                let y = rep.apply(j, x)?;
                for i in 1..=probe_bound {
                    let back = on_term(&y, |l| rep.apply_adjoint(i, l))?;
                    let expected = if i == j {
                        MonomialTerm::unit(x.clone())
                    } else {
                        MonomialTerm::Zero
                    };
                    ensure_term!(
                        p,
                        x,
                        format!(
                            "{}{}",
                            op_name(signature, i, true),
                            op_name(signature, j, false)
                        ),
                        expected,
                        back
                    );
                }
            }
        } else {
            let mut parts = Vec::with_capacity(bound);
            for i in 1..=bound {
                parts.push(on_term(&rep.apply_adjoint(i, x)?, |l| rep.apply(i, l))?);
            }
            let total = sum_of(&parts);
            let identity = VectorSum::basis(x.clone());
            match signature {
                Signature::Finite(_) => ensure_sum!(p, x, "Σ s_i s_i*".into(), identity, total),
                Signature::Infinity => {
                    if !(total.is_empty() || p.near_sum(&total, &identity)) {
                        return Ok(p.fail(
                            Some(x),
                            format!("Σ_(j≤{bound}) t_j t_j*"),
                            "0 or the input".into(),
                            total.to_string(),
                        ));
                    }
                }
            }
        }
    }
    p.pass()
}

/// Generator-by-generator equality of two representations on `labels`.
fn same_action(
    p: &mut Probe,
    a: &MonomialRep,
    b: &MonomialRep,
    labels: &[BasisLabel],
    j_bound: usize,
) -> Result<Outcome> {
    let signature = a.signature();
    let bound = signature.generator_bound(j_bound);
    for x in labels {
        p.samples += 1;
        for g in 1..=bound {
            for adjoint in [false, true] {
                ensure_term!(
                    p,
                    x,
                    op_name(signature, g, adjoint),
                    act(b, g, adjoint, x)?,
                    act(a, g, adjoint, x)?
                );
            }
        }
    }
    p.pass()
}

struct Catalogs {
    by_arity: BTreeMap<usize, Vec<(CatalogEntry, Vec<BasisLabel>)>>,
}

impl Catalogs {
    fn build(config: &SuiteConfig) -> Result<Self> {
        let mut by_arity = BTreeMap::new();
        for &m in &config.grid {
            let entries = catalog(&config.catalog, m)?
                .into_iter()
                .map(|e| {
                    let labels = e.rep.labels(config.depth);
                    (e, labels)
                })
                .collect();
            by_arity.insert(m, entries);
        }
        Ok(Catalogs { by_arity })
    }

    fn at(&self, m: usize) -> &[(CatalogEntry, Vec<BasisLabel>)] {
        self.by_arity.get(&m).map_or(&[], Vec::as_slice)
    }
}

fn grid(config: &SuiteConfig) -> Vec<usize> {
    let mut g = config.grid.clone();
    g.sort_unstable();
    g.dedup();
    g
}

pub(crate) fn run_all(r: &mut Runner) -> Result<()> {
    let config = r.config;
    let cats = Catalogs::build(config)?;
    rep_checks(r, &cats)?;
    embedding_checks(r, &cats)?;
    series_checks(r, &cats)?;
    functor_checks(r, &cats)?;
    infinity_checks(r, &cats)?;
    scenario_checks(r)?;
    closedform_checks(r, &cats)?;
    expr_checks(r, &cats)?;
    Ok(())
}

fn rep_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    let free = make_free_infinity_rep();
    let free_labels = free.labels(config.depth);
    let mut subjects: Vec<(&MonomialRep, &[BasisLabel])> = Vec::new();
    for m in grid(config) {
        for (e, labels) in cats.at(m) {
            subjects.push((&e.rep, labels));
        }
    }
    subjects.push((&free, &free_labels));

    for &(rep, labels) in &subjects {
        r.run("rep.cuntz_orthogonality", rep.describe(), || {
            cuntz_relations(
                &mut Probe::new(rep.describe(), config),
                rep,
                labels,
                config.j_bound,
                true,
            )
        });
        r.run("rep.cuntz_completeness", rep.describe(), || {
            cuntz_relations(
                &mut Probe::new(rep.describe(), config),
                rep,
                labels,
                config.j_bound,
                false,
            )
        });
        if rep.signature() == Signature::Infinity {
            continue;
        }
        r.run("rep.range_decode", rep.describe(), || {
            let mut p = Probe::new(rep.describe(), config);
            let n = rep.signature().require_finite()?;
            for x in labels {
                p.samples += 1;
                let Some(d) = rep.range_decode(x)? else {
                    return Ok(p.fail(
                        Some(x),
                        "range_decode".into(),
                        "a decomposition".into(),
                        "none".into(),
                    ));
                };
                let rebuilt = rep.apply(d.generator, &d.pre)?.scaled(d.phase);
                ensure_term!(
                    p,
                    x,
                    format!("φ·s{} on the preimage", d.generator),
                    MonomialTerm::unit(x.clone()),
                    rebuilt
                );
                for i in (1..=n).filter(|&i| i != d.generator) {
                    ensure_term!(
                        p,
                        x,
                        op_name(rep.signature(), i, true),
                        MonomialTerm::Zero,
                        rep.apply_adjoint(i, x)?
                    );
                }
            }
            p.pass()
        });
    }
    for m in grid(config) {
        for c in [1, m] {
            for lambda in [ONE, -ONE, I] {
                let rep = make_cycle_rep(m, c, lambda)?;
                r.run("rep.cycle_eigenphase", rep.describe(), || {
                    let mut p = Probe::new(rep.describe(), config);
                    let omega = BasisLabel::omega();
                    p.samples = 1;
                    ensure_term!(
                        p,
                        &omega,
                        format!("s{c}"),
                        MonomialTerm::new(lambda, omega.clone()),
                        rep.apply(c, &omega)?
                    );
                    ensure_term!(
                        p,
                        &omega,
                        format!("s{c}*"),
                        MonomialTerm::new(lambda.conj(), omega.clone()),
                        rep.apply_adjoint(c, &omega)?
                    );
                    p.pass()
                });
            }
        }
    }
    r.close("rep.cycle_eigenphase", mark);
    Ok(())
}

fn embedding_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    for m in grid(config) {
        for (e, labels) in cats.at(m) {
            let rep = &e.rep;
            let name = e.name();
            r.run("embedding.shift", &name, || {
                let mut p = Probe::new(&name, config);
                for x in labels {
                    p.samples += 1;
                    for j in 1..=EMBEDDED_J {
                        let lhs = on_term(&apply_embedded(rep, j, x, false)?, |y| rep.apply(m, y))?;
                        ensure_term!(
                            p,
                            x,
                            format!("s{m} f(t{j})"),
                            apply_embedded(rep, j + m - 1, x, false)?,
                            lhs
                        );
                    }
                }
                p.pass()
            });
            r.run("embedding.adjoint_shift", &name, || {
                let mut p = Probe::new(&name, config);
                for x in labels {
                    p.samples += 1;
                    for j in 1..=EMBEDDED_J {
                        let lhs = on_term(&apply_embedded(rep, j, x, false)?, |y| {
                            rep.apply_adjoint(m, y)
                        })?;
                        let expected = if j >= m {
                            apply_embedded(rep, j + 1 - m, x, false)?
                        } else {
                            MonomialTerm::Zero
                        };
                        ensure_term!(p, x, format!("s{m}* f(t{j})"), expected, lhs);
                    }
                }
                p.pass()
            });
            r.run("embedding.isometries", &name, || {
                let mut p = Probe::new(&name, config);
                for x in labels {
                    p.samples += 1;
                    for j in 1..=EMBEDDED_J {
                        let up = apply_embedded(rep, j, x, false)?;
                        for i in 1..=EMBEDDED_J {
                            let back = on_term(&up, |y| apply_embedded(rep, i, y, true))?;
                            let expected = if i == j {
                                MonomialTerm::unit(x.clone())
                            } else {
                                MonomialTerm::Zero
                            };
                            ensure_term!(p, x, format!("f(t{i})* f(t{j})"), expected, back);
                        }
                    }
                }
                p.pass()
            });
        }
    }
    for name in [
        "embedding.shift",
        "embedding.adjoint_shift",
        "embedding.isometries",
    ] {
        r.close(name, mark);
    }
    Ok(())
}

fn r_term(rep: &MonomialRep, a: usize, t: &MonomialTerm, adjoint: bool) -> Result<MonomialTerm> {
    on_term(t, |y| apply_r(rep, a, y, adjoint))
}

fn q_term(rep: &MonomialRep, t: &MonomialTerm) -> Result<MonomialTerm> {
    on_term(t, |y| apply_q(rep, y))
}

const SERIES_CHECKS: [&str; 14] = [
    "series.r_semigroup",
    "series.r_isometry",
    "series.q_absorbs_r",
    "series.r_on_embedded",
    "series.sn_shifts_r",
    "series.r_blockwise",
    "series.embedded_adjoint_r",
    "series.q_projection",
    "series.single_summand",
    "series.r_oracle",
    "series.q_extremes",
    "series.u_partial_isometry",
    "series.u_orthogonal_r",
    "series.u_plus_r",
];

fn series_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    for m in grid(config) {
        for (e, labels) in cats.at(m) {
            series_on_rep(r, e, labels, m)?;
        }
        q_extremes(r, m)?;
    }
    for name in SERIES_CHECKS {
        r.close(name, mark);
    }
    Ok(())
}

fn series_on_rep(r: &mut Runner, e: &CatalogEntry, labels: &[BasisLabel], n: usize) -> Result<()> {
    let config = r.config;
    let rep = &e.rep;
    let name = e.name();
    r.run("series.r_semigroup", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            for b in SHIFTS {
                let rb = apply_r(rep, b, x, false)?;
                for a in SHIFTS {
                    ensure_term!(
                        p,
                        x,
                        format!("R[{a}] R[{b}]"),
                        apply_r(rep, a + b, x, false)?,
                        r_term(rep, a, &rb, false)?
                    );
                }
            }
        }
        p.pass()
    });
    r.run("series.r_isometry", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            let q = apply_q(rep, x)?;
            for a in SHIFTS {
                let ra = apply_r(rep, a, x, false)?;
                ensure_term!(
                    p,
                    x,
                    format!("R[{a}]* R[{a}]"),
                    q.clone(),
                    r_term(rep, a, &ra, true)?
                );
                let range = r_term(rep, a, &apply_r(rep, a, x, true)?, false)?;
                ensure_sum!(
                    p,
                    x,
                    format!("R[{a}] R[{a}]*"),
                    tail_projection(rep, a + 1, x)?,
                    VectorSum::from_term(&range)
                );
            }
        }
        p.pass()
    });
    r.run("series.q_absorbs_r", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            let q = apply_q(rep, x)?;
            for a in SHIFTS {
                let ra = apply_r(rep, a, x, false)?;
                ensure_term!(p, x, format!("Q R[{a}]"), ra.clone(), q_term(rep, &ra)?);
                ensure_term!(
                    p,
                    x,
                    format!("R[{a}] Q"),
                    ra.clone(),
                    r_term(rep, a, &q, false)?
                );
            }
        }
        p.pass()
    });
    r.run("series.r_on_embedded", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            for j in 1..=EMBEDDED_J {
                let fj = apply_embedded(rep, j, x, false)?;
                ensure_term!(p, x, format!("Q f(t{j})"), fj.clone(), q_term(rep, &fj)?);
                for a in SHIFTS {
                    ensure_term!(
                        p,
                        x,
                        format!("R[{a}] f(t{j})"),
                        apply_embedded(rep, j + a, x, false)?,
                        r_term(rep, a, &fj, false)?
                    );
                }
            }
        }
        p.pass()
    });
    r.run("series.sn_shifts_r", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            let sq = on_term(&apply_q(rep, x)?, |y| rep.apply(n, y))?;
            ensure_term!(p, x, format!("s{n} Q"), apply_r(rep, n - 1, x, false)?, sq);
            for a in SHIFTS {
                let lhs = on_term(&apply_r(rep, a, x, false)?, |y| rep.apply(n, y))?;
                ensure_term!(
                    p,
                    x,
                    format!("s{n} R[{a}]"),
                    apply_r(rep, a + n - 1, x, false)?,
                    lhs
                );
            }
        }
        p.pass()
    });
    if !e.parts.is_empty() {
        r.run("series.r_blockwise", &name, || {
            let mut p = Probe::new(&name, config);
            for x in labels {
                let BasisLabel::Pair(branch, inner) = x else {
                    return Ok(p.fail(
                        Some(x),
                        "block label".into(),
                        "a pair label".into(),
                        x.to_string(),
                    ));
                };
                p.samples += 1;
                let part = &e.parts[*branch as usize];
                for a in SHIFTS {
                    for adjoint in [false, true] {
                        let expected = match apply_r(part, a, inner, adjoint)? {
                            MonomialTerm::Zero => MonomialTerm::Zero,
                            MonomialTerm::Basis { phase, label } => {
                                MonomialTerm::new(phase, BasisLabel::pair(*branch, label))
                            }
                        };
                        let star = if adjoint { "*" } else { "" };
                        ensure_term!(
                            p,
                            x,
                            format!("R[{a}]{star}"),
                            expected,
                            apply_r(rep, a, x, adjoint)?
                        );
                    }
                }
            }
            p.pass()
        });
    }
    r.run("series.embedded_adjoint_r", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            for a in SHIFTS {
                let ra = apply_r(rep, a, x, false)?;
                for j in 1..=EMBEDDED_J {
                    let lhs = on_term(&ra, |y| apply_embedded(rep, j, y, true))?;
                    let expected = if j > a {
                        apply_embedded(rep, j - a, x, true)?
                    } else {
                        MonomialTerm::Zero
                    };
                    ensure_term!(p, x, format!("f(t{j})* R[{a}]"), expected, lhs);
                }
            }
        }
        p.pass()
    });
    r.run("series.q_projection", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            let q = apply_q(rep, x)?;
            let diagonal = match &q {
                MonomialTerm::Zero => true,
                MonomialTerm::Basis { phase, label } => label == x && (phase - ONE).norm() <= p.tol,
            };
            if !diagonal {
                return Ok(p.fail(Some(x), "Q".into(), "0 or the input".into(), q.to_string()));
            }
            ensure_term!(p, x, "Q Q".into(), q.clone(), q_term(rep, &q)?);
        }
        p.pass()
    });
    r.run("series.single_summand", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            let hits = contributing_indices(rep, x)?;
            let from_strip = match strip_classify(rep, x)? {
                StripResult::InRange { j, .. } => vec![j],
                _ => Vec::new(),
            };
            if hits.len() > 1 || hits != from_strip {
                return Ok(p.fail(
                    Some(x),
                    "f(t_j) f(t_j)*".into(),
                    format!("{from_strip:?}"),
                    format!("{hits:?}"),
                ));
            }
        }
        p.pass()
    });
    r.run("series.r_oracle", &name, || {
        let mut p = Probe::new(&name, config);
        for x in labels {
            p.samples += 1;
            for a in SHIFTS {
                for adjoint in [false, true] {
                    let star = if adjoint { "*" } else { "" };
                    let fast = VectorSum::from_term(&apply_r(rep, a, x, adjoint)?);
                    ensure_sum!(
                        p,
                        x,
                        format!("R[{a}]{star}"),
                        r_by_summation(rep, a, x, adjoint)?,
                        fast
                    );
                }
            }
        }
        p.pass()
    });
    r.run("series.u_partial_isometry", &name, || {
        let mut p = Probe::new(&name, config);
        let complement = parse("I - Q")?;
        let forms = [("U' U", parse("U' U")?), ("U U'", parse("U U'")?)];
        for x in labels {
            p.samples += 1;
            let expected = eval_basis(&complement, rep, x, false)?;
            for (text, expr) in &forms {
                ensure_sum!(
                    p,
                    x,
                    text.to_string(),
                    expected.clone(),
                    eval_basis(expr, rep, x, false)?
                );
            }
        }
        p.pass()
    });
    r.run("series.u_orthogonal_r", &name, || {
        let mut p = Probe::new(&name, config);
        let u = OperatorExpr::U;
        for x in labels {
            p.samples += 1;
            for a in SHIFTS {
                let ra = apply_r(rep, a, x, false)?;
                let lhs = on_term(&ra, |y| eval_basis(&u, rep, y, true)?.to_term())?;
                ensure_term!(p, x, format!("U* R[{a}]"), MonomialTerm::Zero, lhs);
            }
        }
        p.pass()
    });
    r.run("series.u_plus_r", &name, || {
        let mut p = Probe::new(&name, config);
        let mut forms = Vec::new();
        for a in SHIFTS {
            forms.push((
                a,
                parse(&format!("(U + R[{a}])' (U + R[{a}])"))?,
                parse(&format!("(U + R[{a}]) (U + R[{a}])'"))?,
                parse(&format!("I - Q + R[{a}] R[{a}]'"))?,
            ));
        }
        for x in labels {
            p.samples += 1;
            for (a, gram, range, projection) in &forms {
                ensure_sum!(
                    p,
                    x,
                    format!("(U+R[{a}])*(U+R[{a}])"),
                    VectorSum::basis(x.clone()),
                    eval_basis(gram, rep, x, false)?
                );
                ensure_sum!(
                    p,
                    x,
                    format!("(U+R[{a}])(U+R[{a}])*"),
                    eval_basis(projection, rep, x, false)?,
                    eval_basis(range, rep, x, false)?
                );
            }
        }
        p.pass()
    });
    Ok(())
}

fn q_extremes(r: &mut Runner, m: usize) -> Result<()> {
    let config = r.config;
    let mut subjects = vec![(make_standard_rep(m)?, true)];
    for c in [1, m] {
        for lambda in [ONE, -ONE, I] {
            subjects.push((make_cycle_rep(m, c, lambda)?, c == 1));
        }
    }
    for (rep, full) in subjects {
        let name = rep.describe();
        let labels = rep.labels(config.depth);
        r.run("series.q_extremes", &name, || {
            let mut p = Probe::new(&name, config);
            let mut inside = None;
            let mut outside = None;
            for x in &labels {
                p.samples += 1;
                let q = apply_q(&rep, x)?;
                if q.is_zero() {
                    outside.get_or_insert_with(|| x.clone());
                } else {
                    inside.get_or_insert_with(|| x.clone());
                }
                if full {
                    ensure_term!(p, x, "Q".into(), MonomialTerm::unit(x.clone()), q);
                }
            }
            if full {
                return p.pass_with("Q = I");
            }
            let omega = BasisLabel::omega();
            ensure_term!(
                p,
                &omega,
                "Q".into(),
                MonomialTerm::Zero,
                apply_q(&rep, &omega)?
            );
            match (inside, outside) {
                (Some(i), Some(o)) => p.pass_with(format!("Q e_{i} = e_{i}, Q e_{o} = 0")),
                _ => Ok(p.fail(
                    None,
                    "Q".into(),
                    "a label in range(Q) and one outside".into(),
                    "no witness".into(),
                )),
            }
        });
    }
    Ok(())
}

const FUNCTOR_CHECKS: [&str; 8] = [
    "functor.cuntz_closure",
    "functor.identity",
    "functor.composition",
    "functor.inverse",
    "functor.series_invariance",
    "functor.label_space",
    "functor.direct_sum",
    "functor.morphisms",
];

fn functor_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    let g = grid(config);
    for &n in &g {
        for &m in &g {
            for (e, labels) in cats.at(m) {
                let rep = &e.rep;
                let subject = format!("n={n} m={m} rep={}", e.name());
                let image = functor_apply(n, m, rep)?;
                r.run("functor.cuntz_closure", &subject, || {
                    let mut p = Probe::new(image.describe(), config);
                    let orth = cuntz_relations(&mut p, &image, labels, config.j_bound, true)?;
                    if !matches!(orth, Outcome::Pass { .. }) {
                        return Ok(orth);
                    }
                    p.samples = 0;
                    cuntz_relations(&mut p, &image, labels, config.j_bound, false)
                });
                if n == m {
                    r.run("functor.identity", &subject, || {
                        same_action(
                            &mut Probe::new(image.describe(), config),
                            &image,
                            rep,
                            labels,
                            config.j_bound,
                        )
                    });
                }
                r.run("functor.inverse", &subject, || {
                    let back = functor_apply(m, n, &image)?;
                    same_action(
                        &mut Probe::new(back.describe(), config),
                        &back,
                        rep,
                        labels,
                        config.j_bound,
                    )
                });
                r.run("functor.series_invariance", &subject, || {
                    let mut p = Probe::new(image.describe(), config);
                    for x in labels {
                        p.samples += 1;
                        ensure_term!(p, x, "Q".into(), apply_q(rep, x)?, apply_q(&image, x)?);
                        for a in SHIFTS {
                            for adjoint in [false, true] {
                                let star = if adjoint { "*" } else { "" };
                                ensure_term!(
                                    p,
                                    x,
                                    format!("R[{a}]{star}"),
                                    apply_r(rep, a, x, adjoint)?,
                                    apply_r(&image, a, x, adjoint)?
                                );
                            }
                        }
                    }
                    p.pass()
                });
                r.run("functor.label_space", &subject, || {
                    let mut p = Probe::new(image.describe(), config);
                    p.samples = labels.len();
                    let image_labels = image.labels(config.depth);
                    if &image_labels != labels {
                        return Ok(p.fail(
                            None,
                            "labels".into(),
                            format!("{} source labels", labels.len()),
                            format!("{} image labels", image_labels.len()),
                        ));
                    }
                    if let Some(x) = labels.iter().find(|x| !image.contains(x)) {
                        return Ok(p.fail(
                            Some(x),
                            "contains".into(),
                            "true".into(),
                            "false".into(),
                        ));
                    }
                    p.pass()
                });
                if !e.parts.is_empty() {
                    r.run("functor.direct_sum", &subject, || {
                        direct_sum_law(config, n, m, e, labels)
                    });
                }
            }
            for l in &g {
                for (e, labels) in cats.at(*l) {
                    let subject = format!("n={n} m={m} l={l} rep={}", e.name());
                    r.run("functor.composition", &subject, || {
                        let composed = functor_apply(n, m, &functor_apply(m, *l, &e.rep)?)?;
                        let direct = functor_apply(n, *l, &e.rep)?;
                        same_action(
                            &mut Probe::new(composed.describe(), config),
                            &composed,
                            &direct,
                            labels,
                            config.j_bound,
                        )
                    });
                }
            }
            if config.catalog != super::CatalogChoice::Empty {
                let triple = basic_reps(m)?;
                if triple.len() >= 3 {
                    let entry = CatalogEntry::sum(triple[..3].to_vec())?;
                    let labels = entry.rep.labels(config.depth);
                    let subject = format!("n={n} m={m} rep={}", entry.name());
                    r.run("functor.direct_sum", &subject, || {
                        direct_sum_law(config, n, m, &entry, &labels)
                    });
                }
                morphism_checks(r, n, m)?;
            }
        }
    }
    for name in FUNCTOR_CHECKS {
        r.close(name, mark);
    }
    Ok(())
}

fn direct_sum_law(
    config: &SuiteConfig,
    n: usize,
    m: usize,
    e: &CatalogEntry,
    labels: &[BasisLabel],
) -> Result<Outcome> {
    let whole = functor_apply(n, m, &e.rep)?;
    let images = e
        .parts
        .iter()
        .map(|part| functor_apply(n, m, part))
        .collect::<Result<Vec<_>>>()?;
    let blockwise = direct_sum(&images)?;
    same_action(
        &mut Probe::new(whole.describe(), config),
        &whole,
        &blockwise,
        labels,
        config.j_bound,
    )
}

/// The intertwiner family for a pair of representations; `bool` is the
/// expected membership in `Mor`.
fn family(a: &MonomialRep, b: &MonomialRep, depth: usize) -> Result<Vec<(IntertwinerMap, bool)>> {
    let sum = direct_sum(&[a.clone(), b.clone()])?;
    let mut out = vec![
        (IntertwinerMap::identity(a.clone()), true),
        (IntertwinerMap::inclusion(a.clone(), sum.clone(), 0), true),
        (IntertwinerMap::inclusion(b.clone(), sum.clone(), 1), true),
        (IntertwinerMap::projection(sum.clone(), a.clone(), 0), true),
        (IntertwinerMap::projection(sum.clone(), b.clone(), 1), true),
        (IntertwinerMap::zero(a.clone(), b.clone()), true),
    ];
    // b's vectors placed in a's block: only meaningful when the label sets match.
    if b.labels(depth).iter().all(|x| a.contains(x))
        && a.labels(depth).iter().all(|x| b.contains(x))
    {
        let mut wrong = IntertwinerMap::inclusion(b.clone(), sum, 0);
        wrong.name = "inclusion[0] of the second summand".into();
        out.push((wrong, false));
    }
    Ok(out)
}

fn membership(map: &IntertwinerMap, depth: usize, j_bound: usize) -> Result<Option<String>> {
    let samples = map.source.labels(depth);
    Ok(intertwiner_violation(map, &samples, j_bound)?.map(|v| v.to_string()))
}

fn morphism_checks(r: &mut Runner, n: usize, m: usize) -> Result<()> {
    let config = r.config;
    let basic = basic_reps(m)?;
    for pair in basic.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let subject = format!("n={n} m={m} pair=({},{})", a.describe(), b.describe());
        r.run("functor.morphisms", &subject, || {
            let mut p = Probe::new(&subject, config);
            let mut members = 0;
            let maps = family(a, b, config.depth)?;
            for (map, expected) in &maps {
                p.samples += 1;
                let source = membership(map, config.depth, config.j_bound)?;
                let image = map.retarget(
                    functor_apply(n, m, &map.source)?,
                    functor_apply(n, m, &map.target)?,
                );
                let target = membership(&image, config.depth, config.j_bound)?;
                if source.is_none() != *expected {
                    return Ok(p.fail(
                        None,
                        map.name.clone(),
                        format!("source membership {expected}"),
                        source.unwrap_or_else(|| "member".into()),
                    ));
                }
                if source.is_none() != target.is_none() {
                    return Ok(p.fail(
                        None,
                        map.name.clone(),
                        format!("image membership {}", source.is_none()),
                        target.unwrap_or_else(|| "member".into()),
                    ));
                }
                members += usize::from(source.is_none());
            }
            p.pass_with(format!(
                "{members} of {} maps are morphisms on both sides",
                maps.len()
            ))
        });
    }
    Ok(())
}

const INFINITY_CHECKS: [&str; 6] = [
    "functor.restrict_composition",
    "functor.restriction_relations",
    "functor.extend_restrict",
    "functor.extend_composition",
    "functor.extension_closure",
    "functor.extension_morphisms",
];

fn infinity_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    let g = grid(config);
    for &m in &g {
        for (e, labels) in cats.at(m) {
            let restricted = functor_restrict(m, &e.rep)?;
            r.run(
                "functor.restriction_relations",
                format!("m={m} rep={}", e.name()),
                || {
                    let mut p = Probe::new(restricted.describe(), config);
                    let orth = cuntz_relations(&mut p, &restricted, labels, config.j_bound, true)?;
                    if !matches!(orth, Outcome::Pass { .. }) {
                        return Ok(orth);
                    }
                    p.samples = 0;
                    cuntz_relations(&mut p, &restricted, labels, config.j_bound, false)
                },
            );
            for &n in &g {
                r.run(
                    "functor.restrict_composition",
                    format!("n={n} m={m} rep={}", e.name()),
                    || {
                        let lhs = functor_restrict(n, &functor_apply(n, m, &e.rep)?)?;
                        same_action(
                            &mut Probe::new(lhs.describe(), config),
                            &lhs,
                            &restricted,
                            labels,
                            config.j_bound,
                        )
                    },
                );
            }
        }
    }

    // O_∞ representations to extend: the free one and restrictions of the
    // catalog entries that are not direct sums.
    let mut sigmas = vec![make_free_infinity_rep()];
    for &k in &g {
        for (e, _) in cats.at(k).iter().filter(|(e, _)| e.parts.is_empty()) {
            sigmas.push(functor_restrict(k, &e.rep)?);
        }
    }
    for sigma in &sigmas {
        let labels = sigma.labels(config.depth);
        for &n in &g {
            let extended = functor_extend(n, sigma)?;
            let subject = format!("n={n} rep={}", sigma.describe());
            r.run("functor.extend_restrict", &subject, || {
                let back = functor_restrict(n, &extended)?;
                same_action(
                    &mut Probe::new(back.describe(), config),
                    &back,
                    sigma,
                    &labels,
                    config.j_bound,
                )
            });
            r.run("functor.extension_closure", &subject, || {
                let mut p = Probe::new(extended.describe(), config);
                let orth = cuntz_relations(&mut p, &extended, &labels, config.j_bound, true)?;
                if !matches!(orth, Outcome::Pass { .. }) {
                    return Ok(orth);
                }
                p.samples = 0;
                cuntz_relations(&mut p, &extended, &labels, config.j_bound, false)
            });
            for &m in &g {
                r.run(
                    "functor.extend_composition",
                    format!("n={n} m={m} rep={}", sigma.describe()),
                    || {
                        let lhs = functor_apply(n, m, &functor_extend(m, sigma)?)?;
                        same_action(
                            &mut Probe::new(lhs.describe(), config),
                            &lhs,
                            &extended,
                            &labels,
                            config.j_bound,
                        )
                    },
                );
            }
        }
    }

    let free = make_free_infinity_rep();
    let std_restricted = functor_restrict(2, &make_standard_rep(2)?)?;
    for &n in &g {
        let subject = format!("n={n} pair=(free:inf,{})", std_restricted.describe());
        r.run("functor.extension_morphisms", &subject, || {
            let mut p = Probe::new(&subject, config);
            let mut maps = family(&free, &std_restricted, config.depth)?;
            maps.push((
                IntertwinerMap::new("prepend 1", free.clone(), free.clone(), |x| match x {
                    BasisLabel::Word(w) => {
                        let mut v = vec![1];
                        v.extend_from_slice(w);
                        Ok(MonomialTerm::unit(BasisLabel::word(&v)))
                    }
                    other => Err(crate::error::Error::ForeignLabel(other.clone())),
                }),
                false,
            ));
            let mut members = 0;
            for (map, expected) in &maps {
                p.samples += 1;
                let source = membership(map, config.depth, config.j_bound)?;
                if source.is_none() != *expected {
                    return Ok(p.fail(
                        None,
                        map.name.clone(),
                        format!("source membership {expected}"),
                        source.unwrap_or_else(|| "member".into()),
                    ));
                }
                let image = map.retarget(
                    functor_extend(n, &map.source)?,
                    functor_extend(n, &map.target)?,
                );
                let target = membership(&image, config.depth, config.j_bound)?;
                if source.is_none() != target.is_none() {
                    return Ok(p.fail(
                        None,
                        map.name.clone(),
                        format!("image membership {}", source.is_none()),
                        target.unwrap_or_else(|| "member".into()),
                    ));
                }
                members += usize::from(source.is_none());
            }
            p.pass_with(format!(
                "{members} of {} maps are morphisms on both sides",
                maps.len()
            ))
        });
    }
    for name in INFINITY_CHECKS {
        r.close(name, mark);
    }
    Ok(())
}

fn scenario_body(
    n: usize,
    lambda1: Scalar,
    lambda2: Scalar,
    config: &SuiteConfig,
) -> Result<Outcome> {
    let pi1 = make_cycle_rep(n, n, lambda1)?;
    let pi2 = make_cycle_rep(n, n, lambda2)?;
    let mut p = Probe::new(format!("{} vs {}", pi1.describe(), pi2.describe()), config);
    let omega = BasisLabel::omega();
    let s1 = pi1.apply(n, &omega)?;
    let s2 = pi2.apply(n, &omega)?;
    ensure_term!(
        p,
        &omega,
        format!("s{n} on the first source"),
        MonomialTerm::new(lambda1, omega.clone()),
        s1.clone()
    );
    ensure_term!(
        p,
        &omega,
        format!("s{n} on the second source"),
        MonomialTerm::new(lambda2, omega.clone()),
        s2.clone()
    );
    let eta1 = functor_restrict(n, &pi1)?;
    let eta2 = functor_restrict(n, &pi2)?;
    for (eta, which) in [(&eta1, "first"), (&eta2, "second")] {
        for j in 1..=config.j_bound {
            ensure_term!(
                p,
                &omega,
                format!("t{j}* on the {which} restriction"),
                MonomialTerm::Zero,
                eta.apply_adjoint(j, &omega)?
            );
        }
    }
    let labels = pi1.labels(config.depth);
    let same = same_action(&mut p, &eta1, &eta2, &labels, config.j_bound)?;
    if !matches!(same, Outcome::Pass { .. }) {
        return Ok(same);
    }
    if p.near_term(&s1, &s2) {
        p.pass_with("degenerate control: the sources agree at (s_n, Ω)")
    } else {
        p.pass_with(format!(
            "sources differ at (s{n}, Ω): {s1} vs {s2}; restrictions agree"
        ))
    }
}

/// Two Cuntz-state representations with eigenphases `λ1`, `λ2` at `(s_n, Ω)`
/// and their restrictions along `f_{n,∞}`.
pub fn scenario_with_phases(
    n: usize,
    lambda1: Scalar,
    lambda2: Scalar,
    config: &SuiteConfig,
) -> CheckReport {
    let standalone = SuiteConfig {
        suite: "all".into(),
        ..config.clone()
    };
    let mut runner = Runner {
        config: &standalone,
        reports: Vec::new(),
    };
    runner.run(
        "scenario.cuntz_states",
        format!("n={n} λ1={lambda1} λ2={lambda2}"),
        || scenario_body(n, lambda1, lambda2, &standalone),
    );
    runner.reports.pop().expect("the scenario always reports")
}

/// `cyc(n,n,1)` against `cyc(n,n,−1)` with the default sample depth and j-bound.
pub fn scenario_cuntz_states(n: usize) -> CheckReport {
    scenario_with_phases(n, ONE, -ONE, &SuiteConfig::default())
}

fn scenario_checks(r: &mut Runner) -> Result<()> {
    let config = r.config;
    let g = grid(config);
    for &n in &g {
        r.run(
            "scenario.cuntz_states",
            format!("n={n} λ1=1 λ2=-1"),
            || scenario_body(n, ONE, -ONE, config),
        );
    }
    if let Some(&n) = g.first() {
        r.run(
            "scenario.cuntz_states",
            format!("n={n} λ1=1 λ2=1 (control)"),
            || scenario_body(n, ONE, ONE, config),
        );
    }
    Ok(())
}

fn closedform_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    let g = grid(config);
    for &n in &g {
        for &m in &g {
            let case = classify_case(n, m)?;
            let exprs = (1..=n)
                .map(|j| closed_generator_expr(case, j))
                .collect::<Result<Vec<_>>>()?;
            for (e, labels) in cats.at(m) {
                let subject = format!("n={n} m={m} rep={}", e.name());
                r.run("closedform.general", &subject, || {
                    let image = functor_apply(n, m, &e.rep)?;
                    let mut p = Probe::new(image.describe(), config);
                    for x in labels {
                        p.samples += 1;
                        for (j, expr) in exprs.iter().enumerate() {
                            let expected = VectorSum::from_term(&image.apply(j + 1, x)?);
                            ensure_sum!(
                                p,
                                x,
                                format!("s{} ({case})", j + 1),
                                expected,
                                expr.eval_basis(&e.rep, x)?
                            );
                        }
                    }
                    p.pass_with(case.to_string())
                });
            }
            if let ClosedFormCase::CaseIIa { k0, .. } = case {
                let power = OperatorExpr::product(vec![OperatorExpr::gen(GenFamily::R, m); k0]);
                let mut reps = vec![make_standard_rep(m)?];
                reps.push(make_cycle_rep(m, 1, -ONE)?);
                for rep in reps {
                    let subject = format!("n={n} m={m} rep={}", rep.describe());
                    r.run("closedform.polynomial_collapse", &subject, || {
                        let image = functor_apply(n, m, &rep)?;
                        let mut p = Probe::new(image.describe(), config);
                        for x in rep.labels(config.depth) {
                            p.samples += 1;
                            ensure_term!(
                                p,
                                &x,
                                "Q".into(),
                                MonomialTerm::unit(x.clone()),
                                apply_q(&rep, &x)?
                            );
                            ensure_term!(
                                p,
                                &x,
                                format!("s{n} vs r{m}^{k0}"),
                                eval_monomial(&power, &rep, &x)?,
                                image.apply(n, &x)?
                            );
                        }
                        p.pass_with(format!("{power}"))
                    });
                }
            }
        }
    }

    for d in REFERENCE_DISPLAYS {
        if !(g.contains(&d.n) && g.contains(&d.m)) {
            continue;
        }
        r.run("closedform.display", d.name, || {
            let series = d.to_series()?;
            let mut p = Probe::new(d.name, config);
            let mut first = None;
            let mut differing = 0;
            for (e, labels) in cats.at(d.m) {
                p.samples += labels.len();
                let mismatches = compare_with_functor(d.n, &series, d.generator, &e.rep, labels)?;
                differing += mismatches.len();
                if first.is_none() {
                    first = mismatches.into_iter().next().map(|mm| (e.name(), mm));
                }
            }
            let op = format!("F[{},{}] s{}", d.n, d.m, d.generator);
            match (first, d.expected_to_agree) {
                (None, true) => p.pass_with(format!("{series}")),
                (Some((rep, mm)), true) => Ok(Outcome::Fail(Counterexample {
                    rep,
                    label: Some(mm.label.to_string()),
                    generator: Some(op),
                    expected: mm.expected.to_string(),
                    actual: mm.actual.to_string(),
                })),
                (Some((rep, mm)), false) => Ok(Outcome::Finding {
                    samples: p.samples,
                    detail: format!(
                        "{}; {differing} of {} samples differ from the constructive functor",
                        d.note, p.samples
                    ),
                    counterexample: Some(Counterexample {
                        rep,
                        label: Some(mm.label.to_string()),
                        generator: Some(op),
                        expected: mm.expected.to_string(),
                        actual: mm.actual.to_string(),
                    }),
                }),
                (None, false) if p.samples == 0 => Ok(Outcome::Vacuous("empty catalog".into())),
                (None, false) => Ok(p.fail(
                    None,
                    op,
                    "a documented discrepancy".into(),
                    "full agreement".into(),
                )),
            }
        });
    }

    if g.contains(&4) && g.contains(&3) {
        let case = ClosedFormCase::CaseIIb {
            n: 4,
            m: 3,
            k0: 1,
            j0: 2,
        };
        for (e, labels) in cats.at(3) {
            r.run(
                "closedform.f43_general",
                format!("rep={}", e.name()),
                || {
                    let mut p = Probe::new(e.name(), config);
                    if classify_case(4, 3)? != case {
                        return Ok(p.fail(
                            None,
                            "case split".into(),
                            case.to_string(),
                            classify_case(4, 3)?.to_string(),
                        ));
                    }
                    let expr = closed_generator_expr(case, 4)?;
                    p.samples = labels.len();
                    let mismatches = compare_with_functor(4, &expr, 4, &e.rep, labels)?;
                    if let Some(mm) = mismatches.first() {
                        return Ok(p.fail(
                            Some(&mm.label),
                            "s4".into(),
                            mm.expected.to_string(),
                            mm.actual.to_string(),
                        ));
                    }
                    p.pass_with(format!("{expr}"))
                },
            );
        }
    }
    for name in [
        "closedform.general",
        "closedform.display",
        "closedform.f43_general",
        "closedform.polynomial_collapse",
    ] {
        r.close(name, mark);
    }
    Ok(())
}

fn expr_checks(r: &mut Runner, cats: &Catalogs) -> Result<()> {
    let config = r.config;
    let mark = r.reports.len();
    let exprs = EXPRESSIONS
        .iter()
        .map(|t| Ok((*t, parse(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let alpha = Scalar::new(2.0, -1.0);
    let beta = Scalar::new(0.5, 1.5);
    for m in grid(config) {
        for (e, labels) in cats.at(m) {
            let rep = &e.rep;
            let name = e.name();
            r.run("expr.linearity", &name, || {
                let mut p = Probe::new(&name, config);
                for pair in labels.windows(2) {
                    let (x, y) = (&pair[0], &pair[1]);
                    p.samples += 1;
                    let mut v = VectorSum::new();
                    v.add(x.clone(), alpha);
                    v.add(y.clone(), beta);
                    for (text, expr) in &exprs {
                        let mut expected = eval_basis(expr, rep, x, false)?.scaled(alpha);
                        expected.add_scaled(&eval_basis(expr, rep, y, false)?, beta);
                        ensure_sum!(p, x, text.to_string(), expected, eval(expr, rep, &v)?);
                    }
                }
                p.pass()
            });
            r.run("expr.adjoint_contract", &name, || {
                let mut p = Probe::new(&name, config);
                for (text, expr) in &exprs {
                    let adjoint = expr.clone().adjoint();
                    for x in labels {
                        p.samples += 1;
                        let ex = VectorSum::basis(x.clone());
                        let forward = eval(expr, rep, &ex)?;
                        let backward = eval(&adjoint, rep, &ex)?;
                        // ⟨A e_x, e_y⟩ against ⟨e_x, A* e_y⟩ on every y the two supports reach.
                        for y in forward
                            .iter()
                            .map(|(y, _)| y)
                            .chain(backward.iter().map(|(y, _)| y))
                        {
                            let ey = VectorSum::basis(y.clone());
                            let lhs = forward.inner(&ey);
                            let rhs = ex.inner(&eval(&adjoint, rep, &ey)?);
                            if (lhs - rhs).norm() > p.tol {
                                return Ok(p.fail(
                                    Some(x),
                                    format!("{text} against e_{y}"),
                                    rhs.to_string(),
                                    lhs.to_string(),
                                ));
                            }
                            let lhs = eval(expr, rep, &ey)?.inner(&ex);
                            let rhs = ey.inner(&backward);
                            if (lhs - rhs).norm() > p.tol {
                                return Ok(p.fail(
                                    Some(y),
                                    format!("{text} against e_{x}"),
                                    rhs.to_string(),
                                    lhs.to_string(),
                                ));
                            }
                        }
                    }
                }
                p.pass()
            });
        }
    }
    r.close("expr.linearity", mark);
    r.close("expr.adjoint_contract", mark);
    Ok(())
}
