//! Per-subcommand suites: the checks of one module at the configured parameters.

use std::time::Duration;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::json;

use crate::acris::{
    apply_m, ars_contains, conucleo_solve, nygaard_modified_contains, nygaard_modified_kernel, DPSeries, Profile,
    RSPair,
};
use crate::fcrystals::{lifting_chain_exists, smoothness_predicate, FCrystalDatum, Verdict};
use crate::galois_witt::{teichmuller, FieldDesc, RingDesc, WittArith, WittVector};
use crate::hasse_witt::{
    hw_invertible, hw_matrix, hw_stable_rank, paper_hypersurface, parse_poly, singular_point_search,
    union_of_hyperplanes, HomogPoly,
};
use crate::report::{Budget, Report, RunConfig, Status};
use crate::verify::{run_check, run_named, Outcome, CHECKS};
use crate::{attempt, budget};

const LIMIT: Duration = Duration::from_secs(600);

/// Runs checks in order against the global budget of `config`.
struct Runner<'a> {
    config: &'a RunConfig,
    total: Budget,
    report: Report,
}

impl<'a> Runner<'a> {
    fn new(command: &str, config: &'a RunConfig) -> Self {
        Self { config, total: Budget::unlimited(), report: Report::new(command, config) }
    }

    fn remaining(&self) -> Option<Duration> {
        self.config.budget_ms.map(|b| Duration::from_millis(b).saturating_sub(self.total.elapsed()))
    }

    fn run(&mut self, id: u32, name: &str, f: impl FnOnce(&mut crate::verify::Ctx) -> Outcome) {
        let r = run_named(id, name, LIMIT, self.config, self.remaining(), f);
        self.report.push(r);
    }

    fn acceptance(&mut self, index: usize) {
        let r = run_check(&CHECKS[index], self.config, self.remaining());
        self.report.push(r);
    }

    fn finish(mut self) -> Report {
        self.report.elapsed_ms = Some(self.total.elapsed().as_millis() as u64);
        self.report
    }
}

/// Ghost homomorphism over `Z`, `FV = VF = p` and Teichmüller multiplicativity at length `precision`.
pub fn witt_suite(config: &RunConfig, samples: usize) -> Report {
    let (p, m, n) = (config.p, config.m, config.precision as usize);
    let mut run = Runner::new("witt", config);
    run.run(101, "ghost-homomorphism", |ctx| {
        let w = WittArith::new(p, n);
        for i in 0..samples {
            budget!(ctx, i, samples);
            let mut draw = || WittVector::new((0..n).map(|_| BigInt::from(ctx.rng.gen_range(-60i64..=60))).collect());
            let (a, b) = (draw(), draw());
            let (ga, gb) = (a.ghost(p), b.ghost(p));
            let gs = attempt!(w.add(&a, &b), i).ghost(p);
            let gm = attempt!(w.mul(&a, &b), i).ghost(p);
            if !(0..n).all(|k| gs[k] == &ga[k] + &gb[k] && gm[k] == &ga[k] * &gb[k]) {
                return Outcome::fail(i as u64 + 1, "ghost map is not a ring homomorphism", json!({"a": format!("{:?}", a.comps), "b": format!("{:?}", b.comps)}));
            }
        }
        Outcome::pass(samples as u64, format!("p = {p}, length {n}"))
    });
    run.run(102, "frobenius-verschiebung", |ctx| {
        let k = attempt!(FieldDesc::new(p, m), 0);
        let w = WittArith::new(p, n);
        for i in 0..samples {
            budget!(ctx, i, samples);
            let a = WittVector::new((0..n).map(|_| k.random(&mut ctx.rng)).collect());
            let pa = attempt!(w.scale(&a, p), i);
            let fv = attempt!(w.frobenius(&a.verschiebung()), i);
            let vf = attempt!(w.frobenius(&a), i).verschiebung();
            if fv != pa || vf != pa {
                return Outcome::fail(i as u64 + 1, "FV = VF = p fails", json!(format!("{:?}", a.comps)));
            }
        }
        Outcome::pass(samples as u64, format!("over F_{p}^{m}, length {n}"))
    });
    run.run(103, "teichmuller-multiplicative", |ctx| {
        let ring = attempt!(RingDesc::standard(p, m, n as u32), 0);
        for i in 0..samples {
            budget!(ctx, i, samples);
            let (a, b) = (ring.field.random(&mut ctx.rng), ring.field.random(&mut ctx.rng));
            let lhs = teichmuller(&ring, &a).mul(&teichmuller(&ring, &b));
            if lhs != teichmuller(&ring, &a.mul(&b)) || teichmuller(&ring, &a).reduce() != a {
                return Outcome::fail(i as u64 + 1, "Teichmüller lift is not multiplicative", json!({"a": a.to_string(), "b": b.to_string()}));
            }
        }
        Outcome::pass(samples as u64, format!("in W_{n}(F_{p}^{m})"))
    });
    run.finish()
}

/// Ring axioms, Nygaard routes and `conucleo` residuals at the configured profile.
pub fn acris_suite(config: &RunConfig, conucleo: Option<(u32, u32)>, samples: usize) -> Report {
    let mut run = Runner::new("acris", config);
    let profile = RingDesc::standard(config.p, config.m, config.precision)
        .and_then(|r| Profile::new(r, config.denom_depth, config.degree_cap));
    let pr = match profile {
        Ok(pr) => pr,
        Err(e) => {
            run.run(201, "profile", |_| Outcome::error(0, e));
            return run.finish();
        }
    };
    run.run(201, "divided-power-axioms", |ctx| {
        for i in 0..samples {
            budget!(ctx, i, samples);
            let [a, b, c] = [0; 3].map(|_| DPSeries::random(&pr, 4, 3, &mut ctx.rng));
            let same = |x: &DPSeries, y: &DPSeries| x.sub(y).is_ok_and(|d| d.is_zero());
            let ab = attempt!(a.mul(&b), i);
            let assoc = same(&attempt!(ab.mul(&c), i), &attempt!(a.mul(&attempt!(b.mul(&c), i)), i));
            let comm = same(&ab, &attempt!(b.mul(&a), i));
            let dist = same(&attempt!(a.mul(&attempt!(b.add(&c), i)), i), &attempt!(ab.add(&attempt!(a.mul(&c), i)), i));
            if !(assoc && comm && dist) {
                return Outcome::fail(i as u64 + 1, "ring axiom fails", json!({"a": a.to_string(), "b": b.to_string(), "c": c.to_string()}));
            }
        }
        Outcome::pass(samples as u64, "associative, commutative, distributive")
    });
    run.run(202, "nygaard-routes-agree", |ctx| {
        let top = config.precision.min(3);
        let arith = WittArith::new(config.p, top as usize);
        for i in 0..samples {
            budget!(ctx, i, samples);
            let a = DPSeries::random(&pr, 3, 3, &mut ctx.rng).mul_p_pow(ctx.rng.gen_range(0..3));
            for level in 1..=top {
                let d = attempt!(nygaard_modified_contains(&a, level), i);
                let k = attempt!(nygaard_modified_kernel(&a, level, &arith), i);
                if d != k {
                    return Outcome::fail(i as u64 + 1, "divisibility and kernel routes disagree", json!({"a": a.to_string(), "level": level}));
                }
            }
        }
        Outcome::pass(samples as u64, format!("levels 1-{top}"))
    });
    let pairs = conucleo.map_or_else(|| vec![(0, 1), (1, 2), (2, 3), (1, 3)], |rs| vec![rs]);
    for (r, s) in pairs {
        run.run(203, &format!("conucleo-{r}-{s}"), |ctx| {
            let rs = attempt!(RSPair::new(r, s), 0);
            for i in 0..samples {
                budget!(ctx, i, samples);
                let b = DPSeries::random(&pr, 5, config.denom_depth.saturating_sub(s), &mut ctx.rng);
                let a = attempt!(conucleo_solve(&b, rs), i);
                let m = attempt!(apply_m(&a, rs), i);
                let res = attempt!(m.sub(&attempt!(b.to_precision(m.profile.precision()), i)), i);
                if !attempt!(ars_contains(&a, rs), i) || res.valuation() < 1 {
                    return Outcome::fail(i as u64 + 1, "residual not divisible by p", json!({"b": b.to_string(), "residual": res.to_string()}));
                }
            }
            Outcome::pass(samples as u64, "all residuals vanish mod p")
        });
    }
    run.finish()
}

/// Smoothness predicate against lifting chains (depth ≤ 6) and the recorded verdict, per datum.
pub fn crystal_suite(config: &RunConfig, data: &[FCrystalDatum]) -> Report {
    let mut run = Runner::new("crystal", config);
    for (i, d) in data.iter().enumerate() {
        run.run(300 + i as u32, d.name(), |_| {
            let rep = attempt!(smoothness_predicate(d, config.denom_depth, config.degree_cap), 0);
            let mut chains = true;
            for a in &d.v_gens {
                for n in 0..=6 {
                    chains &= attempt!(lifting_chain_exists(d, a, n), 0);
                }
            }
            let verdict = serde_json::to_value(rep.verdict).unwrap_or_default();
            let witness = json!({"verdict": verdict, "chains_to_depth_6": chains, "reason": rep.reason, "witness": rep.witness});
            let agrees = match rep.verdict {
                Verdict::Inconclusive => {
                    return Outcome { status: Status::Inconclusive, samples: 1, detail: rep.reason, witness: Some(witness) }
                }
                Verdict::Smooth => chains,
                Verdict::NotSmooth => !chains,
            };
            let expected = d.file.expected.as_deref().is_none_or(|e| Some(e) == verdict.as_str());
            if agrees && expected {
                Outcome { status: Status::Pass, samples: 1, detail: format!("{} (chains agree)", verdict.as_str().unwrap_or("")), witness: Some(witness) }
            } else {
                Outcome::fail(1, "predicate, chains and recorded verdict disagree", witness)
            }
        });
    }
    run.finish()
}

/// Figure reproduction.
pub fn spectral_suite(config: &RunConfig) -> Report {
    let mut run = Runner::new("spectral", config);
    run.acceptance(4);
    run.finish()
}

#[derive(Debug, Clone, Default)]
pub struct HwOptions {
    /// Polynomial literal over `F_{p^m}`.
    pub poly: Option<String>,
    /// Degree of the τ-invariant form over `F_2`.
    pub paper_f: Option<u32>,
    /// Ambient dimension for the paper form and for hyperplane unions.
    pub n: usize,
    pub scan_m: Option<usize>,
    /// Number of random general-position unions to test.
    pub unions: usize,
}

/// Hasse–Witt matrix and singular-point scan of one form, plus random unions; without a form
/// or unions, the Hasse–Witt and elliptic acceptance checks.
pub fn hw_suite(config: &RunConfig, opts: &HwOptions) -> Report {
    let mut run = Runner::new("hw", config);
    let form: Option<crate::Result<HomogPoly>> = match (&opts.poly, opts.paper_f) {
        (Some(text), _) => Some(FieldDesc::new(config.p, config.m).and_then(|k| parse_poly(text, &k, None))),
        (None, Some(d1)) => Some(paper_hypersurface(d1, opts.n)),
        (None, None) => None,
    };
    if form.is_none() && opts.unions == 0 {
        run.acceptance(5);
        run.acceptance(6);
        return run.finish();
    }
    if let Some(form) = form {
        let f = match form {
            Ok(f) => f,
            Err(e) => {
                run.run(401, "form", |_| Outcome::error(0, e));
                return run.finish();
            }
        };
        run.run(401, "hasse-witt-matrix", |_| {
            let h = hw_matrix(&f);
            let inv = hw_invertible(&h);
            let detail = format!("dimension {}, {}", h.dim(), if inv { "invertible" } else { "not invertible" });
            Outcome {
                status: Status::Pass,
                samples: 1,
                detail,
                witness: Some(json!({"form": f.to_string(), "matrix": h, "invertible": inv, "stable_rank": hw_stable_rank(&h)})),
            }
        });
        if opts.paper_f.is_some() && opts.poly.is_none() {
            run.run(402, "tau-invariant", |_| {
                if f.tau_swap() == f {
                    Outcome::pass(1, "fixed by x0 <-> x1")
                } else {
                    Outcome::fail(1, "not fixed by x0 <-> x1", json!(f.to_string()))
                }
            });
        }
        if let Some(m) = opts.scan_m {
            run.run(403, "singular-scan", |ctx| {
                // one point per microsecond is a conservative rate for the remaining time
                let points = ctx.config.budget_ms.map_or(u64::MAX, |b| b.saturating_mul(1000));
                let scan = attempt!(singular_point_search(&f, m, points), 0);
                let witness = json!(scan);
                if !scan.complete {
                    Outcome { status: Status::Inconclusive, samples: scan.points_checked, detail: format!("scan stopped after F_2^{}", scan.scanned_up_to), witness: Some(witness) }
                } else if scan.points.is_empty() {
                    Outcome { status: Status::Pass, samples: scan.points_checked, detail: format!("no singular points over F_{}^m, m ≤ {m}", f.field.p), witness: Some(witness) }
                } else {
                    Outcome::fail(scan.points_checked, format!("{} singular points found", scan.points.len()), witness)
                }
            });
        }
    }
    if opts.unions > 0 {
        let (n, count) = (opts.n, opts.unions);
        run.run(404, "general-unions", |ctx| {
            let mut invertible = 0;
            for i in 0..count {
                budget!(ctx, i, count);
                let d = (n + 1 + i % 3) as u32;
                let u = attempt!(union_of_hyperplanes(config.p, n, d, &mut ctx.rng), i);
                invertible += usize::from(hw_invertible(&hw_matrix(&u.poly)));
            }
            let detail = format!("{invertible} of {count} unions in P^{n} invertible");
            if invertible * 100 >= count * 95 {
                Outcome::pass(count as u64, detail)
            } else {
                Outcome::fail(count as u64, detail, json!({"invertible": invertible}))
            }
        });
    }
    run.finish()
}
