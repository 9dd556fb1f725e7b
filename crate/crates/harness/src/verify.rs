//! Invariant suites run by `lsc verify`.
//!
//! Every suite is a named function that counts checks and violations.
//! [`MANIFEST`] maps each documented invariant to the suite exercising it;
//! the `harness.manifest` suite and a meta-test keep the two in sync.
//!
//! Exhaustive suites refuse to run past `verify.cap` enumerated items and
//! report a capacity error naming the suite. Random suites draw per-check
//! seeds from the run seed, so reports are reproducible for any worker count.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use lsc_core::channel::{apply, apply_exact, apply_matrix, ChannelMode, ChannelSpec};
use lsc_core::rng::{derive_seed, rng_from_seed, TrialRng};
use lsc_core::{
    BoundedDistanceDecoder, ComponentDecoder, DecodeFailure, ExtFieldElement, FieldParams, GabidulinCode,
    LayeredCode, LiftedCode, LiftedDecoded, MatrixFq, PrimeField, RankCodeword, SicOptions, Subspace,
};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig};
use crate::records::{to_csv_string, SIMULATE_COLUMNS};
use crate::simulate::run_simulate;
use crate::trial::{decode, verdicts, LayerVerdict};
use crate::HarnessError;

/// One documented invariant and the suite that checks it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub module: &'static str,
    pub statement: &'static str,
    pub suite: &'static str,
}

pub const MANIFEST: &[Invariant] = &[
    Invariant { module: "finite_field", statement: "addition and multiplication are associative, commutative and distributive", suite: "field.axioms" },
    Invariant { module: "finite_field", statement: "the Frobenius map is additive", suite: "field.frobenius" },
    Invariant { module: "finite_field", statement: "coordinates and elements are in bijection for q = 2, m <= 8", suite: "field.coordinates" },
    Invariant { module: "subspace_linalg", statement: "subspace distance is a metric", suite: "subspace.metric" },
    Invariant { module: "subspace_linalg", statement: "dim(A + B) + dim(A ∩ B) = dim A + dim B", suite: "subspace.dimension" },
    Invariant { module: "subspace_linalg", statement: "A' ⊆ A implies dim A - dim(A ∩ B) >= dim A' - dim(A' ∩ B)", suite: "subspace.restriction" },
    Invariant { module: "subspace_linalg", statement: "sum and intersection agree with vector enumeration", suite: "subspace.enumeration" },
    Invariant { module: "gabidulin", statement: "encoding is linear", suite: "gabidulin.linearity" },
    Invariant { module: "gabidulin", statement: "minimum rank distance is exactly n - k + 1", suite: "gabidulin.mrd" },
    Invariant { module: "gabidulin", statement: "every error of rank <= (n - k) / 2 is corrected", suite: "gabidulin.decode_exhaustive" },
    Invariant { module: "gabidulin", statement: "bounded decoding never disagrees with brute force inside the radius", suite: "gabidulin.oracle" },
    Invariant { module: "lifted_code", statement: "lifted distance is twice the rank distance and the minimum is attained", suite: "lifted.distance" },
    Invariant { module: "lifted_code", statement: "subspace decoding recovers every in-capability outcome", suite: "lifted.decode" },
    Invariant { module: "lifted_code", statement: "subspace decoding never returns a wrong codeword when brute force finds a unique one in capability", suite: "lifted.oracle" },
    Invariant { module: "layered_code", statement: "d_S(V, U) >= d_S(V_l, U_l) for every layer", suite: "layered.layer_distance" },
    Invariant { module: "layered_code", statement: "V_l ∩ U = V_l ∩ U_l and U_l ∩ V = U_l ∩ V_l", suite: "layered.intersections" },
    Invariant { module: "layered_code", statement: "both algorithms recover V whenever 2 d_S(V, U) < d_S(C)", suite: "layered.guaranteed" },
    Invariant { module: "layered_code", statement: "the successive decoder's accumulated distances are non-increasing", suite: "layered.monotone_chain" },
    Invariant { module: "layered_code", statement: "embedded components intersect trivially", suite: "layered.direct_sum" },
    Invariant { module: "layered_code", statement: "iterative successive decoding decodes a superset of layers on erasure-only channels", suite: "layered.iterative_dominance" },
    Invariant { module: "layered_code", statement: "the overall minimum distance equals the smallest component distance and is attained", suite: "layered.distance_attained" },
    Invariant { module: "layered_code", statement: "V and its components determine each other", suite: "layered.uniqueness" },
    Invariant { module: "layered_code", statement: "extraction keeps exactly the vectors vanishing on the other identity blocks", suite: "layered.extraction" },
    Invariant { module: "operator_channel", statement: "exact outcomes satisfy U = (V ∩ U) ⊕ E and d_S(V, U) = rho + t", suite: "channel.exact" },
    Invariant { module: "operator_channel", statement: "identical seeds give identical outcomes", suite: "channel.determinism" },
    Invariant { module: "operator_channel", statement: "matrix-mode rho <= dim V and t <= error packets", suite: "channel.matrix" },
    Invariant { module: "cli_harness", statement: "CSV output is byte-identical across runs and worker counts", suite: "harness.csv_determinism" },
    Invariant { module: "cli_harness", statement: "summary counts equal the column sums of the records", suite: "harness.summary" },
    Invariant { module: "cli_harness", statement: "every invariant is mapped to a registered suite", suite: "harness.manifest" },
];

type SuiteFn = fn(&Ctx) -> Result<Tally, HarnessError>;

const SUITES: &[(&str, SuiteFn)] = &[
    ("field.axioms", field_axioms),
    ("field.frobenius", field_frobenius),
    ("field.coordinates", field_coordinates),
    ("subspace.metric", subspace_metric),
    ("subspace.dimension", subspace_dimension),
    ("subspace.restriction", subspace_restriction),
    ("subspace.enumeration", subspace_enumeration),
    ("gabidulin.linearity", gabidulin_linearity),
    ("gabidulin.mrd", gabidulin_mrd),
    ("gabidulin.decode_exhaustive", gabidulin_decode_exhaustive),
    ("gabidulin.oracle", gabidulin_oracle),
    ("lifted.distance", lifted_distance),
    ("lifted.decode", lifted_decode),
    ("lifted.oracle", lifted_oracle),
    ("layered.layer_distance", layered_layer_distance),
    ("layered.intersections", layered_intersections),
    ("layered.guaranteed", layered_guaranteed),
    ("layered.monotone_chain", layered_monotone_chain),
    ("layered.direct_sum", layered_direct_sum),
    ("layered.iterative_dominance", layered_iterative_dominance),
    ("layered.distance_attained", layered_distance_attained),
    ("layered.uniqueness", layered_uniqueness),
    ("layered.extraction", layered_extraction),
    ("channel.exact", channel_exact),
    ("channel.determinism", channel_determinism),
    ("channel.matrix", channel_matrix),
    ("harness.csv_determinism", harness_csv_determinism),
    ("harness.summary", harness_summary),
    ("harness.manifest", harness_manifest),
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(message());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.violations += other.violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub tally: Tally,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.tally.violations == 0)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.suites {
            let verdict = if r.tally.violations == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{verdict}  {:<28}  checks={:<8} violations={}",
                r.name, r.tally.checks, r.tally.violations
            );
            if let Some(msg) = &r.tally.first_violation {
                let _ = writeln!(s, "      first violation: {msg}");
            }
        }
        s
    }
}

struct Ctx<'a> {
    config: &'a ExperimentConfig,
    code: LayeredCode,
    decoder: &'a dyn ComponentDecoder,
    pool: rayon::ThreadPool,
    /// Index of the running suite, used as the seed stream.
    stream: u64,
}

impl Ctx<'_> {
    fn trials(&self) -> u64 {
        self.config.verify.trials
    }

    fn decode_trials(&self) -> u64 {
        self.config.verify.decode_trials
    }

    fn capped(&self, suite: &str, size: u128) -> Result<(), HarnessError> {
        if size > self.config.verify.cap {
            return Err(HarnessError::Capacity {
                suite: suite.into(),
                size,
                cap: self.config.verify.cap,
            });
        }
        Ok(())
    }

    /// Runs `n` independent seeded checks in parallel, merged in index order.
    fn par<F>(&self, n: u64, f: F) -> Result<Tally, HarnessError>
    where
        F: Fn(&mut TrialRng, u64) -> Result<Tally, HarnessError> + Sync,
    {
        let base = self.config.seed;
        let stream = self.stream;
        self.pool.install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut rng = rng_from_seed(derive_seed(base, 1_000 + stream, i));
                    f(&mut rng, i)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
        })
    }

    /// `(ρ, t)` pairs with `2 (ρ + t) < d_S(C)` that the channel can realize.
    fn guaranteed_points(&self) -> Vec<(usize, usize)> {
        let code = &self.code;
        let mut out = Vec::new();
        for rho in 0..=code.total_n() {
            for t in 0..=code.m() {
                if 2 * (rho + t) < code.min_distance() {
                    out.push((rho, t));
                }
            }
        }
        out
    }
}

/// Names of the registered suites, in run order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs every suite with the bounded-distance component decoder.
pub fn run_verify(config: &ExperimentConfig) -> Result<VerifyReport, HarnessError> {
    run_verify_with(config, &BoundedDistanceDecoder, None)
}

/// Runs the suites named in `only` (all when `None`) with `decoder` as the
/// component decoder of the layered suites.
pub fn run_verify_with(
    config: &ExperimentConfig,
    decoder: &dyn ComponentDecoder,
    only: Option<&[&str]>,
) -> Result<VerifyReport, HarnessError> {
    let mut report = VerifyReport::default();
    for (index, &(name, suite)) in SUITES.iter().enumerate() {
        if only.is_some_and(|names| !names.contains(&name)) {
            continue;
        }
        let ctx = Ctx {
            config,
            code: config.code(),
            decoder,
            pool: crate::pool(config.workers)?,
            stream: index as u64,
        };
        report.suites.push(SuiteResult {
            name,
            tally: suite(&ctx)?,
        });
    }
    Ok(report)
}

/// A component decoder that decodes correctly and then reports a different
/// codeword. Used to check that the suites notice a broken decoder.
#[derive(Clone, Copy, Debug, Default)]
pub struct CorruptedDecoder;

impl ComponentDecoder for CorruptedDecoder {
    fn decode(&self, code: &LiftedCode, received: &Subspace) -> Result<LiftedDecoded, DecodeFailure> {
        let mut out = BoundedDistanceDecoder.decode(code, received)?;
        let params = code.params();
        out.message[0] = &out.message[0] + &params.one();
        out.matrix = code
            .inner()
            .encode(&out.message)
            .map_err(|_| DecodeFailure::Malformed)?
            .to_matrix(params);
        out.subspace = code.lift(&out.matrix).map_err(|_| DecodeFailure::Malformed)?;
        Ok(out)
    }
}

mod oracle {
    use std::collections::BTreeSet;

    use lsc_core::{MatrixFq, PrimeField};

    /// Every vector of the row span of `m`, by enumerating coefficient vectors.
    pub fn span(m: &MatrixFq) -> BTreeSet<Vec<u32>> {
        let f = m.field();
        let q = f.order();
        let mut out = BTreeSet::new();
        let mut coeffs = vec![0u32; m.rows()];
        loop {
            let mut v = vec![0u32; m.cols()];
            for (r, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    for (j, x) in v.iter_mut().enumerate() {
                        *x = f.add(*x, f.mul(c, m.get(r, j)));
                    }
                }
            }
            out.insert(v);
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    /// `log_q |set|`.
    pub fn dim(f: PrimeField, size: usize) -> usize {
        let mut d = 0;
        let mut s = 1usize;
        while s < size {
            s *= f.order() as usize;
            d += 1;
        }
        assert_eq!(s, size, "span sizes are powers of q");
        d
    }

    /// All `rows × cols` matrices over `f`.
    pub fn all_matrices(f: PrimeField, rows: usize, cols: usize) -> impl Iterator<Item = MatrixFq> {
        let q = f.order() as u128;
        let count = q.pow((rows * cols) as u32);
        (0..count).map(move |mut idx| {
            let mut m = MatrixFq::zeros(f, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, (idx % q) as u32);
                    idx /= q;
                }
            }
            m
        })
    }
}

const F2: PrimeField = PrimeField::binary();

fn random_subspace(rng: &mut TrialRng, ambient: usize) -> Result<Subspace, HarnessError> {
    let dim = rng.gen_range(0..=ambient);
    Ok(Subspace::random(F2, ambient, dim, rng)?)
}

fn field_axioms(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let p = ctx.config.params.clone();
    ctx.par(ctx.trials(), |rng, _| {
        let (a, b, c) = (p.random(rng), p.random(rng), p.random(rng));
        let mut t = Tally::default();
        t.check(&(&a + &b) + &c == &a + &(&b + &c), || format!("(a+b)+c != a+(b+c) for {a:?}, {b:?}, {c:?}"));
        t.check(&(&a * &b) * &c == &a * &(&b * &c), || format!("(ab)c != a(bc) for {a:?}, {b:?}, {c:?}"));
        t.check(&a + &b == &b + &a, || format!("a+b != b+a for {a:?}, {b:?}"));
        t.check(&a * &b == &b * &a, || format!("ab != ba for {a:?}, {b:?}"));
        t.check(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || {
            format!("a(b+c) != ab+ac for {a:?}, {b:?}, {c:?}")
        });
        if !a.is_zero() {
            let inv = a.inverse().map_err(|e| HarnessError::Pool(e.to_string()))?;
            t.check((&a * &inv).is_one(), || format!("a * a^-1 != 1 for {a:?}"));
        }
        Ok(t)
    })
}

fn field_frobenius(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let p = ctx.config.params.clone();
    ctx.par(ctx.trials(), |rng, _| {
        let (a, b) = (p.random(rng), p.random(rng));
        let mut t = Tally::default();
        t.check((&a + &b).frobenius(1) == &a.frobenius(1) + &b.frobenius(1), || {
            format!("frobenius not additive on {a:?}, {b:?}")
        });
        t.check(a.frobenius(1) == a.pow(u64::from(p.q())), || format!("frobenius(a) != a^q for {a:?}"));
        Ok(t)
    })
}

fn field_coordinates(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let mut t = Tally::default();
    let mut fields = Vec::new();
    for m in 1..=8 {
        fields.push(FieldParams::with_default_modulus(2, m).map_err(|e| HarnessError::Pool(e.to_string()))?);
    }
    let own = ctx.config.params.clone();
    ctx.capped("field.coordinates", own.order().unwrap_or(u128::MAX))?;
    fields.push(own);
    for p in fields {
        let order = p.order().expect("capped");
        let mut seen = BTreeSet::new();
        for idx in 0..order {
            let e = p.element_from_index(idx);
            let back = p.element(e.coords().to_vec());
            t.check(back.as_ref() == Ok(&e) && e.to_index() == idx, || {
                format!("coordinate round trip failed at index {idx} (q={}, m={})", p.q(), p.m())
            });
            t.check(seen.insert(e.coords().to_vec()), || format!("index {idx} repeats coordinates"));
        }
    }
    Ok(t)
}

fn subspace_metric(ctx: &Ctx) -> Result<Tally, HarnessError> {
    ctx.par(ctx.trials(), |rng, _| {
        let ambient = rng.gen_range(1..=11);
        let a = random_subspace(rng, ambient)?;
        let b = random_subspace(rng, ambient)?;
        let c = random_subspace(rng, ambient)?;
        let ab = a.distance(&b)?;
        let mut t = Tally::default();
        t.check(ab == b.distance(&a)?, || "distance not symmetric".into());
        t.check((ab == 0) == (a == b), || "distance zero iff equal fails".into());
        t.check(a.distance(&c)? <= ab + b.distance(&c)?, || "triangle inequality fails".into());
        Ok(t)
    })
}

fn subspace_dimension(ctx: &Ctx) -> Result<Tally, HarnessError> {
    ctx.par(ctx.trials(), |rng, _| {
        let ambient = rng.gen_range(1..=11);
        let a = random_subspace(rng, ambient)?;
        let b = random_subspace(rng, ambient)?;
        let mut t = Tally::default();
        let (s, i) = (a.sum(&b)?, a.intersection(&b)?);
        t.check(s.dim() + i.dim() == a.dim() + b.dim(), || {
            format!("dims: sum {} + int {} != {} + {}", s.dim(), i.dim(), a.dim(), b.dim())
        });
        Ok(t)
    })
}

fn subspace_restriction(ctx: &Ctx) -> Result<Tally, HarnessError> {
    ctx.par(ctx.trials(), |rng, _| {
        let ambient = rng.gen_range(1..=11);
        let a = random_subspace(rng, ambient)?;
        let b = random_subspace(rng, ambient)?;
        let sub = a.random_subspace(rng.gen_range(0..=a.dim()), rng)?;
        let lhs = a.dim() - a.intersection(&b)?.dim();
        let rhs = sub.dim() - sub.intersection(&b)?.dim();
        let mut t = Tally::default();
        t.check(sub.is_subspace_of(&a) && lhs >= rhs, || format!("{lhs} < {rhs} in ambient {ambient}"));
        Ok(t)
    })
}

fn subspace_enumeration(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let n = (ctx.trials() / 10).max(1);
    ctx.par(n, |rng, _| {
        let ambient = rng.gen_range(1..=10);
        let ra = rng.gen_range(0..=ambient);
        let rb = rng.gen_range(0..=ambient);
        let ma = MatrixFq::random(F2, ra, ambient, rng);
        let mb = MatrixFq::random(F2, rb, ambient, rng);
        let (a, b) = (Subspace::row_space(&ma), Subspace::row_space(&mb));
        let (sa, sb) = (oracle::span(&ma), oracle::span(&mb));
        let both = ma.vstack(&mb)?;
        let inter: BTreeSet<Vec<u32>> = sa.intersection(&sb).cloned().collect();
        let mut t = Tally::default();
        t.check(oracle::span(a.basis()) == sa, || "row space differs from span".into());
        t.check(oracle::span(a.sum(&b)?.basis()) == oracle::span(&both), || "sum differs from enumeration".into());
        t.check(oracle::span(a.intersection(&b)?.basis()) == inter, || {
            "intersection differs from enumeration".into()
        });
        Ok(t)
    })
}

fn component_codes(ctx: &Ctx) -> Vec<GabidulinCode> {
    ctx.code.layers().iter().map(|l| l.inner().clone()).collect()
}

fn gabidulin_linearity(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let codes = component_codes(ctx);
    let p = ctx.config.params.clone();
    ctx.par(ctx.trials(), |rng, i| {
        let code = &codes[i as usize % codes.len()];
        let u = code.random_message(rng);
        let v = code.random_message(rng);
        let sum: Vec<ExtFieldElement> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let lhs = code.encode(&sum)?.to_matrix(&p);
        let rhs = code.encode(&u)?.to_matrix(&p).add(&code.encode(&v)?.to_matrix(&p))?;
        let mut t = Tally::default();
        t.check(lhs == rhs, || format!("encode not linear for ({}, {})", code.n(), code.k()));
        Ok(t)
    })
}

fn codewords(code: &GabidulinCode) -> Result<Vec<(Vec<ExtFieldElement>, MatrixFq)>, HarnessError> {
    let p = code.params().clone();
    (0..code.num_codewords().unwrap_or(u128::MAX))
        .map(|i| {
            let msg = code.message_from_index(i);
            let x = code.encode(&msg)?.to_matrix(&p);
            Ok((msg, x))
        })
        .collect()
}

fn gabidulin_mrd(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let mut t = Tally::default();
    for code in component_codes(ctx) {
        let size = code.num_codewords().unwrap_or(u128::MAX);
        ctx.capped("gabidulin.mrd", size.saturating_mul(size) / 2)?;
        let words = codewords(&code)?;
        let min = ctx.pool.install(|| {
            (0..words.len())
                .into_par_iter()
                .flat_map_iter(|i| (i + 1..words.len()).map(move |j| (i, j)))
                .map(|(i, j)| words[i].1.sub(&words[j].1).map(|d| d.rank()))
                .try_reduce(|| usize::MAX, |a, b| Ok(a.min(b)))
        })?;
        let expected = code.min_rank_distance();
        t.check(min == expected || words.len() < 2, || {
            format!("({}, {}) code has minimum rank distance {min}, expected {expected}", code.n(), code.k())
        });
    }
    Ok(t)
}

fn gabidulin_decode_exhaustive(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let f = ctx.config.params.base();
    let mut total = Tally::default();
    for code in component_codes(ctx) {
        let p = code.params().clone();
        let radius = (code.n() - code.k()) / 2;
        let space = (f.order() as u128).checked_pow((code.n() * code.m()) as u32).unwrap_or(u128::MAX);
        ctx.capped("gabidulin.decode_exhaustive", space)?;
        let errors: Vec<MatrixFq> = oracle::all_matrices(f, code.n(), code.m())
            .filter(|e| e.rank() <= radius)
            .collect();
        let words = codewords(&code)?;
        ctx.capped(
            "gabidulin.decode_exhaustive",
            (words.len() as u128).saturating_mul(errors.len() as u128),
        )?;
        let t = ctx.pool.install(|| {
            words
                .par_iter()
                .map(|(msg, x)| {
                    let mut t = Tally::default();
                    for e in &errors {
                        let y = RankCodeword::from_matrix(&p, &x.add(e)?)?;
                        let got = code.decode(&y)?;
                        t.check(got.as_ref() == Ok(msg), || {
                            format!("({}, {}) code failed on an error of rank {}", code.n(), code.k(), e.rank())
                        });
                    }
                    Ok::<_, HarnessError>(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
        })?;
        total = total.merge(t);
    }
    Ok(total)
}

fn gabidulin_oracle(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let codes = component_codes(ctx);
    let cap = ctx.config.verify.cap;
    for c in &codes {
        ctx.capped("gabidulin.oracle", c.num_codewords().unwrap_or(u128::MAX))?;
    }
    let f = ctx.config.params.base();
    let p = ctx.config.params.clone();
    ctx.par(ctx.decode_trials(), |rng, i| {
        let code = &codes[i as usize % codes.len()];
        let radius = (code.n() - code.k()) / 2;
        // half the draws are codewords plus a random error, half are arbitrary words
        let y = if i % 2 == 0 {
            let x = code.encode(&code.random_message(rng))?.to_matrix(&p);
            let r = rng.gen_range(0..=radius + 1);
            let e = MatrixFq::random(f, code.n(), r, rng).mul(&MatrixFq::random(f, r, code.m(), rng))?;
            x.add(&e)?
        } else {
            MatrixFq::random(f, code.n(), code.m(), rng)
        };
        let yw = RankCodeword::from_matrix(&p, &y)?;
        let fast = code.decode(&yw)?;
        let slow = code.brute_force_decode(&yw, cap)?;
        let mut t = Tally::default();
        if let Ok(msg) = &slow {
            let d = y.sub(&code.encode(msg)?.to_matrix(&p))?.rank();
            if d <= radius {
                t.check(fast.as_ref() == Ok(msg), || "decoder missed the unique codeword in radius".into());
            }
        }
        if let Ok(msg) = &fast {
            t.check(slow.as_ref() == Ok(msg), || "decoder returned a codeword brute force rejects".into());
        }
        Ok(t)
    })
}

fn lifted_distance(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let mut t = Tally::default();
    for layer in ctx.code.layers() {
        let size = layer.inner().num_codewords().unwrap_or(u128::MAX);
        ctx.capped("lifted.distance", size.saturating_mul(size) / 2)?;
        let words = codewords(layer.inner())?;
        let lifts = words
            .iter()
            .map(|(_, x)| layer.lift(x))
            .collect::<Result<Vec<_>, _>>()?;
        let part = ctx.pool.install(|| {
            (0..words.len())
                .into_par_iter()
                .map(|i| {
                    let mut t = Tally::default();
                    let mut min = usize::MAX;
                    for j in i + 1..words.len() {
                        let ds = lifts[i].distance(&lifts[j])?;
                        let dr = words[i].1.sub(&words[j].1)?.rank();
                        t.check(ds == 2 * dr, || format!("d_S = {ds} but d_R = {dr}"));
                        min = min.min(ds);
                    }
                    Ok::<_, HarnessError>((t, min))
                })
                .try_reduce(
                    || (Tally::default(), usize::MAX),
                    |a, b| Ok((a.0.merge(b.0), a.1.min(b.1))),
                )
        })?;
        t = t.merge(part.0);
        let expected = layer.min_subspace_distance();
        t.check(part.1 == expected || words.len() < 2, || {
            format!("lifted ({}, {}) minimum {} != {expected}", layer.n(), layer.k(), part.1)
        });
    }
    Ok(t)
}

fn lifted_points(layer: &LiftedCode) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for rho in 0..=layer.n() {
        for t in 0..=layer.m() {
            if 2 * (rho + t) < layer.min_subspace_distance() {
                out.push((rho, t));
            }
        }
    }
    out
}

fn lifted_decode(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let cases: Vec<(usize, (usize, usize))> = ctx
        .code
        .layers()
        .iter()
        .enumerate()
        .flat_map(|(l, layer)| lifted_points(layer).into_iter().map(move |pt| (l, pt)))
        .collect();
    let n = ctx.decode_trials() * cases.len() as u64;
    ctx.par(n, |rng, i| {
        let (l, (rho, t)) = cases[(i / ctx.decode_trials()) as usize];
        let layer = &ctx.code.layers()[l];
        let msg = layer.inner().random_message(rng);
        let v = layer.encode(&msg)?;
        let out = apply_exact(&v, rho, t, rng)?;
        let got = layer.subspace_decode(&out.received)?;
        let mut tally = Tally::default();
        tally.check(got.as_ref().is_ok_and(|d| d.subspace == v), || {
            format!("layer {} failed at rho={rho}, t={t}", l + 1)
        });
        Ok(tally)
    })
}

fn lifted_oracle(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let cap = ctx.config.verify.cap;
    for layer in ctx.code.layers() {
        ctx.capped("lifted.oracle", layer.inner().num_codewords().unwrap_or(u128::MAX))?;
    }
    let cases: Vec<(usize, (usize, usize))> = ctx
        .code
        .layers()
        .iter()
        .enumerate()
        .flat_map(|(l, layer)| lifted_points(layer).into_iter().map(move |pt| (l, pt)))
        .collect();
    let n = ctx.decode_trials() * cases.len() as u64;
    ctx.par(n, |rng, i| {
        let (l, (rho, t)) = cases[(i / ctx.decode_trials()) as usize];
        let layer = &ctx.code.layers()[l];
        let v = layer.encode(&layer.inner().random_message(rng))?;
        let out = apply_exact(&v, rho, t, rng)?;
        let fast = layer.subspace_decode(&out.received)?;
        let slow = layer.brute_force_subspace_decode(&out.received, cap)?;
        let mut tally = Tally::default();
        let agree = match (&fast, &slow) {
            (Ok(a), Ok(b)) => a.subspace == b.subspace,
            (Err(_), Err(_)) => true,
            (Err(_), Ok(b)) => 2 * b.subspace.distance(&out.received)? >= layer.min_subspace_distance(),
            (Ok(_), Err(_)) => false,
        };
        tally.check(agree, || format!("layer {} disagrees with brute force at rho={rho}, t={t}", l + 1));
        Ok(tally)
    })
}

/// `(ρ, t)` for check `i`, cycling over `ρ, t ∈ {0..4}` within the bounds.
fn small_point(code: &LayeredCode, i: u64) -> (usize, usize) {
    let rho_max = code.total_n().min(4);
    let t_max = code.m().min(4);
    let cells = ((rho_max + 1) * (t_max + 1)) as u64;
    let c = (i % cells) as usize;
    (c / (t_max + 1), c % (t_max + 1))
}

fn layered_layer_distance(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    ctx.par(ctx.trials(), |rng, i| {
        let (rho, t) = small_point(code, i);
        let cw = code.encode(&code.random_messages(rng))?;
        let out = apply_exact(&cw.subspace, rho, t, rng)?;
        let d = cw.subspace.distance(&out.received)?;
        let mut tally = Tally::default();
        for l in 0..code.num_layers() {
            let v_l = code.extract_component(&cw.subspace, l)?;
            let u_l = code.extract_component(&out.received, l)?;
            let dl = v_l.distance(&u_l)?;
            tally.check(d >= dl, || format!("layer {}: {dl} > {d} at rho={rho}, t={t}", l + 1));
        }
        Ok(tally)
    })
}

fn layered_intersections(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    ctx.par(ctx.trials(), |rng, i| {
        let (rho, t) = small_point(code, i);
        let cw = code.encode(&code.random_messages(rng))?;
        let out = apply_exact(&cw.subspace, rho, t, rng)?;
        let u = &out.received;
        let mut tally = Tally::default();
        for l in 0..code.num_layers() {
            let v_l = &cw.components[l];
            let u_l = code.extract_component_unstripped(u, l)?;
            tally.check(v_l.intersection(u)? == v_l.intersection(&u_l)?, || {
                format!("V_l ∩ U != V_l ∩ U_l for layer {}", l + 1)
            });
            tally.check(u_l.intersection(&cw.subspace)? == u_l.intersection(v_l)?, || {
                format!("U_l ∩ V != U_l ∩ V_l for layer {}", l + 1)
            });
        }
        Ok(tally)
    })
}

const ALL_ALGORITHMS: [Algorithm; 3] = [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg2Iterative];

fn layered_guaranteed(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    let points = ctx.guaranteed_points();
    let per = ctx.decode_trials();
    ctx.par(per * points.len() as u64, |rng, i| {
        let (rho, t) = points[(i / per) as usize];
        let cw = code.encode(&code.random_messages(rng))?;
        let out = apply_exact(&cw.subspace, rho, t, rng)?;
        let mut tally = Tally::default();
        for alg in ALL_ALGORITHMS {
            let report = decode(code, alg, ctx.config.sic, &out.received, ctx.decoder)?;
            let ok = verdicts(&report, &cw).iter().all(|&v| v == LayerVerdict::Ok);
            tally.check(ok && report.recomposed == cw.subspace, || {
                format!("{} did not recover V at rho={rho}, t={t}", alg.as_str())
            });
        }
        Ok(tally)
    })
}

fn layered_monotone_chain(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    let points = ctx.guaranteed_points();
    let per = ctx.decode_trials();
    ctx.par(per * points.len() as u64, |rng, i| {
        let (rho, t) = points[(i / per) as usize];
        let cw = code.encode(&code.random_messages(rng))?;
        let out = apply_exact(&cw.subspace, rho, t, rng)?;
        let mut tally = Tally::default();
        for alg in [Algorithm::Alg2, Algorithm::Alg2Iterative] {
            let report = decode(code, alg, ctx.config.sic, &out.received, ctx.decoder)?;
            let chain = report.distance_chain(&cw.subspace, &out.received)?;
            tally.check(chain.windows(2).all(|w| w[0] >= w[1]), || format!("chain {chain:?} increases"));
            if report.all_decoded() {
                // fully decoded: U + V̂ = U + V, at distance t from V
                tally.check(chain.last() == Some(&out.t), || format!("chain {chain:?} does not end at t = {t}"));
            }
        }
        Ok(tally)
    })
}

fn layered_direct_sum(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    ctx.par(ctx.decode_trials(), |rng, _| {
        let cw = code.encode(&code.random_messages(rng))?;
        let mut tally = Tally::default();
        for i in 0..code.num_layers() {
            for j in i + 1..code.num_layers() {
                let meet = cw.components[i].intersection(&cw.components[j])?;
                tally.check(meet.is_zero(), || format!("V_{} ∩ V_{} != 0", i + 1, j + 1));
            }
        }
        tally.check(cw.subspace.dim() == code.total_n(), || "dim V != N".into());
        Ok(tally)
    })
}

fn layered_iterative_dominance(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    let low = code.min_distance().div_ceil(2).min(code.total_n());
    let sic = ctx.config.sic;
    ctx.par(ctx.decode_trials(), |rng, _| {
        let rho = rng.gen_range(low..=code.total_n());
        let cw = code.encode(&code.random_messages(rng))?;
        let out = apply_exact(&cw.subspace, rho, 0, rng)?;
        let plain = code.decode_alg2_with(&out.received, &SicOptions { iterative: false, ..sic }, ctx.decoder)?;
        let iter = code.decode_alg2_with(&out.received, &SicOptions { iterative: true, ..sic }, ctx.decoder)?;
        let a: BTreeSet<usize> = plain.decoded_layers().into_iter().collect();
        let b: BTreeSet<usize> = iter.decoded_layers().into_iter().collect();
        let mut tally = Tally::default();
        tally.check(a.is_subset(&b), || format!("non-iterative {a:?} not within iterative {b:?} at rho={rho}"));
        Ok(tally)
    })
}

/// The smallest two-layer code, enumerable pairwise.
fn tiny_code() -> Result<LayeredCode, HarnessError> {
    let p = FieldParams::with_default_modulus(2, 2).map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(LayeredCode::new(&p, &[(2, 1), (2, 1)])?)
}

fn all_layered_codewords(code: &LayeredCode) -> Result<Vec<lsc_core::LayeredCodeword>, HarnessError> {
    let sizes: Vec<u128> = code
        .layers()
        .iter()
        .map(|c| c.inner().num_codewords().unwrap_or(u128::MAX))
        .collect();
    let total: u128 = sizes.iter().product();
    (0..total)
        .map(|mut idx| {
            let msgs: Vec<_> = code
                .layers()
                .iter()
                .zip(&sizes)
                .map(|(c, &s)| {
                    let m = c.inner().message_from_index(idx % s);
                    idx /= s;
                    m
                })
                .collect();
            Ok(code.encode(&msgs)?)
        })
        .collect()
}

fn layered_distance_attained(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = tiny_code()?;
    let words = all_layered_codewords(&code)?;
    ctx.capped("layered.distance_attained", (words.len() * words.len()) as u128)?;
    let mut t = Tally::default();
    let mut min = usize::MAX;
    for a in &words {
        for b in &words {
            if a.messages != b.messages {
                let sa = oracle::span(a.subspace.basis());
                let sb = oracle::span(b.subspace.basis());
                let inter = sa.intersection(&sb).count();
                let d = 2 * (a.subspace.dim() - oracle::dim(F2, inter));
                t.check(d == a.subspace.distance(&b.subspace)?, || "distance differs from enumeration".into());
                min = min.min(d);
            }
        }
    }
    t.check(min == code.min_distance(), || {
        format!("pairwise minimum {min} != min_distance {}", code.min_distance())
    });
    t.check(ctx.code.min_distance() == ctx.code.layers().iter().map(|l| l.min_subspace_distance()).min().unwrap(), || {
        "configured code's distance is not the smallest component distance".into()
    });
    Ok(t)
}

fn layered_uniqueness(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = tiny_code()?;
    let words = all_layered_codewords(&code)?;
    ctx.capped("layered.uniqueness", (words.len() * words.len()) as u128)?;
    let mut t = Tally::default();
    for a in &words {
        for b in &words {
            t.check((a.subspace == b.subspace) == (a.components == b.components), || {
                "V and its components disagree on equality".into()
            });
        }
        let stripped = (0..code.num_layers())
            .map(|l| code.extract_component(&a.subspace, l))
            .collect::<Result<Vec<_>, _>>()?;
        t.check(code.recompose(&stripped)? == a.subspace, || "recompose(components) != V".into());
    }
    Ok(t)
}

fn layered_extraction(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    let f = ctx.config.params.base();
    let ambient = code.ambient_dim();
    ctx.capped(
        "layered.extraction",
        (f.order() as u128).checked_pow(ambient as u32).unwrap_or(u128::MAX),
    )?;
    ctx.par((ctx.decode_trials() / 5).max(1), |rng, _| {
        let dim = rng.gen_range(0..=ambient);
        let u = Subspace::random(f, ambient, dim, rng)?;
        let mut tally = Tally::default();
        let all = oracle::span(u.basis());
        for l in 0..code.num_layers() {
            let foreign = code.foreign_identity_coords(l);
            let expected: BTreeSet<Vec<u32>> = all
                .iter()
                .filter(|v| foreign.iter().all(|&c| v[c] == 0))
                .cloned()
                .collect();
            let unstripped = code.extract_component_unstripped(&u, l)?;
            tally.check(oracle::span(unstripped.basis()) == expected, || {
                format!("layer {} extraction differs from enumeration", l + 1)
            });
            tally.check(code.extract_component(&u, l)?.dim() == unstripped.dim(), || {
                "stripping changed the dimension".into()
            });
        }
        Ok(tally)
    })
}

fn channel_exact(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let f = ctx.config.params.base();
    ctx.par(ctx.trials(), |rng, _| {
        let ambient = rng.gen_range(1..=11);
        let dim = rng.gen_range(0..=ambient);
        let v = Subspace::random(f, ambient, dim, rng)?;
        let rho = rng.gen_range(0..=dim);
        let t = rng.gen_range(0..=ambient - dim);
        let out = apply_exact(&v, rho, t, rng)?;
        let common = v.intersection(&out.received)?;
        let mut tally = Tally::default();
        tally.check((out.rho, out.t) == (rho, t), || format!("realized ({}, {}) != ({rho}, {t})", out.rho, out.t));
        tally.check(common.dim() == dim - rho && out.received.dim() == common.dim() + t, || {
            "U != (V ∩ U) ⊕ E by dimension".into()
        });
        tally.check(v.distance(&out.received)? == rho + t, || "d_S(V, U) != rho + t".into());
        Ok(tally)
    })
}

fn channel_determinism(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    ctx.par((ctx.decode_trials() / 5).max(1), |rng, i| {
        let cw = code.encode(&code.random_messages(rng))?;
        let seed = rng.gen();
        let mode = if i % 2 == 0 {
            let rho = rng.gen_range(0..=code.total_n());
            let t = rng.gen_range(0..=code.m());
            ChannelMode::Exact { rho, t }
        } else {
            ChannelMode::Matrix {
                collected: rng.gen_range(0..=code.total_n() + 2),
                error_packets: rng.gen_range(0..=3),
            }
        };
        let spec = ChannelSpec { mode, seed };
        let mut tally = Tally::default();
        tally.check(apply(&cw.subspace, &spec)? == apply(&cw.subspace, &spec)?, || {
            format!("seed {seed} gave different outcomes")
        });
        Ok(tally)
    })
}

fn channel_matrix(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let code = &ctx.code;
    ctx.par(ctx.decode_trials(), |rng, _| {
        let cw = code.encode(&code.random_messages(rng))?;
        let collected = rng.gen_range(0..=code.total_n() + 2);
        let errors = rng.gen_range(0..=4);
        let out = apply_matrix(&cw.subspace, collected, errors, rng)?;
        let mut tally = Tally::default();
        tally.check(out.rho <= cw.subspace.dim() && out.t <= errors, || {
            format!("realized ({}, {}) out of bounds", out.rho, out.t)
        });
        tally.check(cw.subspace.distance(&out.received)? == out.rho + out.t, || "d_S != rho + t".into());
        Ok(tally)
    })
}

fn small_run(ctx: &Ctx, workers: usize) -> ExperimentConfig {
    let mut c = ctx.config.clone();
    c.trials = c.trials.min(20);
    c.workers = Some(workers);
    c
}

fn harness_csv_determinism(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let one = run_simulate(&small_run(ctx, 1))?;
    let again = run_simulate(&small_run(ctx, 1))?;
    let many = run_simulate(&small_run(ctx, 4))?;
    let a = to_csv_string(SIMULATE_COLUMNS, &one.records)?;
    let b = to_csv_string(SIMULATE_COLUMNS, &again.records)?;
    let c = to_csv_string(SIMULATE_COLUMNS, &many.records)?;
    let mut t = Tally::default();
    t.check(a == b, || "repeated runs differ".into());
    t.check(a == c, || "1 and 4 workers differ".into());
    Ok(t)
}

fn harness_summary(ctx: &Ctx) -> Result<Tally, HarnessError> {
    let out = run_simulate(&small_run(ctx, 2))?;
    let text = to_csv_string(SIMULATE_COLUMNS, &out.records)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).expect("known column");
    let (g, a, s) = (col("grid_point"), col("algorithm"), col("success"));
    let mut sums: std::collections::BTreeMap<(String, String), (u64, u64)> = Default::default();
    for row in reader.records() {
        let row = row?;
        let e = sums.entry((row[g].to_string(), row[a].to_string())).or_default();
        e.0 += 1;
        e.1 += row[s].parse::<u64>().unwrap_or(0);
    }
    let mut t = Tally::default();
    t.check(sums.len() == out.summary.rows.len(), || "summary row count differs".into());
    for r in &out.summary.rows {
        let key = (r.grid_point.to_string(), r.algorithm.clone());
        t.check(sums.get(&key) == Some(&(r.trials, r.successes)), || {
            format!("summary for {key:?} differs from the CSV")
        });
    }
    Ok(t)
}

fn harness_manifest(_: &Ctx) -> Result<Tally, HarnessError> {
    let mut t = Tally::default();
    let registered: BTreeSet<&str> = SUITES.iter().map(|s| s.0).collect();
    let mapped: BTreeSet<&str> = MANIFEST.iter().map(|i| i.suite).collect();
    for inv in MANIFEST {
        t.check(registered.contains(inv.suite), || format!("manifest names unknown suite {}", inv.suite));
    }
    for s in &registered {
        t.check(mapped.contains(s), || format!("suite {s} is not in the manifest"));
    }
    Ok(t)
}
