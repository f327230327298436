use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::dilation::{build_dilation_capped, compare_minimal_dilations, SupportSet};
use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice};
use crate::linalg::{self, CMatrix};
use crate::representation::{kernel_positivity, NicaRep};
use crate::schur::{check_positive, lift_compress_check, random_commuting_pair, schur_product};
use crate::semicrossed::{
    dilate_covariant_pair_capped, estimate_norms, gauge_check, induced_representation, sample_pair, Algebra,
    Character, CovariantPair, DynSystem, Polynomial, SamplerConfig, StarRep,
};
use crate::tolerance::Tolerances;

use super::input::{
    Caps, Coeffs, MatrixSpec, NicaQuad, RepresentationInput, Scenario, SigmaInput, SupportInput, SystemInput, TaskInput,
    TermInput, VerifyCheck,
};
use super::report::{Check, Environment, ErrorRecord, Report, TaskRecord, Verdict};

/// Command-line overrides.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub depth: Option<u32>,
    pub parallel: bool,
}

/// The scenario could not be read or resolved against its factors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid scenario: {0}")]
pub struct SchemaError(pub String);

impl From<Error> for SchemaError {
    fn from(e: Error) -> Self {
        SchemaError(e.to_string())
    }
}

pub fn run_scenario_text(text: &str, options: &RunOptions) -> std::result::Result<Report, SchemaError> {
    let scenario = Scenario::from_json(text)?;
    run_scenario(&scenario, options)
}

pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> std::result::Result<Report, SchemaError> {
    let lattice = scenario.lattice()?;
    let mut tolerances = scenario.tolerances;
    if let Some(tol) = options.tol {
        tolerances.tol = tol;
    }
    let seed = options.seed.unwrap_or(scenario.seed);
    let depth = options.depth.unwrap_or(scenario.depth);
    resolve_all(scenario, &lattice)?;

    let mut setup_errors = Vec::new();
    let rep = match &scenario.representation {
        Some(r) => match build_rep(r, &lattice, tolerances.tol) {
            Ok(rep) => Some(rep),
            Err(e) => {
                setup_errors.push(ErrorRecord::from(&e));
                None
            }
        },
        None => None,
    };
    let system = match &scenario.system {
        Some(s) => match build_system(s, &lattice, tolerances.tol) {
            Ok(sys) => Some(sys),
            Err(e) => {
                setup_errors.push(ErrorRecord::from(&e));
                None
            }
        },
        None => None,
    };
    let ctx = Context {
        lattice,
        rep,
        system,
        sigma: scenario.system.as_ref().and_then(|s| s.sigma.clone()),
        tolerances,
        caps: scenario.caps,
        depth,
        setup_failed: !setup_errors.is_empty(),
    };

    let run = |(index, task): (usize, &TaskInput)| ctx.run_task(index, task, seed.wrapping_add(index as u64));
    let tasks: Vec<TaskRecord> = if options.parallel {
        scenario.tasks.par_iter().enumerate().map(run).collect()
    } else {
        scenario.tasks.iter().enumerate().map(run).collect()
    };
    let environment = Environment {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        tolerances,
        depth,
        precision_bits: scenario.precision_bits,
        caps: scenario.caps,
    };
    Ok(Report::finish(scenario.name.clone(), environment, setup_errors, tasks))
}

/// Every coefficient vector and matrix literal must fit the declaration.
fn resolve_all(scenario: &Scenario, lattice: &Lattice) -> Result<()> {
    let matrices = |ms: &[MatrixSpec]| ms.iter().try_for_each(|m| m.to_matrix().map(drop));
    match &scenario.representation {
        Some(RepresentationInput::Tensor { legs: g }) | Some(RepresentationInput::Direct { generators: g }) => {
            g.iter().try_for_each(|group| matrices(group))?
        }
        None => {}
    }
    if let Some(sys) = &scenario.system {
        if let Some(b) = &sys.basis {
            matrices(b)?;
        }
        if let Some(a) = &sys.action {
            a.iter().try_for_each(|group| matrices(group))?;
        }
        if let Some(SigmaInput::Explicit { images }) = &sys.sigma {
            matrices(images)?;
        }
    }
    let coeffs = |cs: &[Coeffs]| cs.iter().try_for_each(|c| c.resolve(lattice).map(drop));
    let support = |s: &SupportInput| s.points.as_deref().map_or(Ok(()), coeffs);
    let terms = |ts: &[TermInput]| {
        ts.iter().try_for_each(|t| {
            t.s.resolve(lattice)?;
            t.a.to_matrix().map(drop)
        })
    };
    for task in &scenario.tasks {
        match task {
            TaskInput::KernelCheck { support: s, .. }
            | TaskInput::Dilate { support: s, .. }
            | TaskInput::CovariantDilate { support: s, .. } => support(s)?,
            TaskInput::Induced { support: s, sigma0, .. } => {
                support(s)?;
                if let Some(SigmaInput::Explicit { images }) = sigma0 {
                    matrices(images)?;
                }
            }
            TaskInput::Verify {
                support: s,
                elements,
                quads,
                ..
            } => {
                support(s)?;
                if let Some(e) = elements {
                    coeffs(e)?;
                }
                for q in quads.iter().flatten() {
                    coeffs(&[q.s.clone(), q.t.clone(), q.mu.clone(), q.nu.clone()])?;
                }
            }
            TaskInput::NormEstimate { polynomial, .. } => terms(polynomial)?,
            TaskInput::Gauge {
                polynomial, characters, ..
            } => {
                terms(polynomial)?;
                for theta in characters.iter().flatten() {
                    Character::new(lattice, theta.clone())?;
                }
            }
            TaskInput::Validate { .. } | TaskInput::SchurCheck { .. } => {}
        }
    }
    Ok(())
}

fn matrix_groups(groups: &[Vec<MatrixSpec>]) -> Result<Vec<Vec<CMatrix>>> {
    groups
        .iter()
        .map(|g| g.iter().map(MatrixSpec::to_matrix).collect())
        .collect()
}

fn build_rep(input: &RepresentationInput, lattice: &Lattice, tol: f64) -> Result<NicaRep> {
    match input {
        RepresentationInput::Tensor { legs } => NicaRep::tensor(lattice, matrix_groups(legs)?, tol),
        RepresentationInput::Direct { generators } => NicaRep::direct(lattice, matrix_groups(generators)?, tol),
    }
}

fn build_system(input: &SystemInput, lattice: &Lattice, tol: f64) -> Result<DynSystem> {
    let algebra = match &input.basis {
        Some(b) => Algebra::from_basis(input.d, b.iter().map(MatrixSpec::to_matrix).collect::<Result<_>>()?, tol)?,
        None => Algebra::full(input.d),
    };
    let unitaries = match &input.action {
        Some(a) => matrix_groups(a)?,
        None => lattice
            .shape()
            .iter()
            .map(|&m| vec![linalg::identity(input.d); m])
            .collect(),
    };
    DynSystem::new(algebra, lattice, unitaries, tol)
}

fn build_sigma(input: Option<&SigmaInput>, algebra: &Algebra, dim: usize) -> Result<StarRep> {
    match input {
        Some(SigmaInput::Identity) => Ok(StarRep::identity(algebra)),
        Some(SigmaInput::Amplify { multiplicity }) => Ok(StarRep::amplified(algebra, *multiplicity)),
        Some(SigmaInput::Explicit { images }) => {
            StarRep::explicit(algebra, images.iter().map(MatrixSpec::to_matrix).collect::<Result<_>>()?)
        }
        None if dim % algebra.d() == 0 => Ok(StarRep::amplified(algebra, dim / algebra.d())),
        None => Err(Error::ShapeMismatch(format!(
            "no sigma given and the algebra size {} does not divide {dim}",
            algebra.d()
        ))),
    }
}

struct Context {
    lattice: Lattice,
    rep: Option<NicaRep>,
    system: Option<DynSystem>,
    sigma: Option<SigmaInput>,
    tolerances: Tolerances,
    caps: Caps,
    depth: u32,
    setup_failed: bool,
}

#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    results: Map<String, Value>,
}

impl Outcome {
    fn put(&mut self, key: &str, value: impl Serialize) {
        self.results
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable result"));
    }
}

fn setup_error() -> Error {
    Error::InvalidArgument("the scenario setup failed; see setup_errors".into())
}

impl Context {
    fn run_task(&self, index: usize, task: &TaskInput, seed: u64) -> TaskRecord {
        let start = Instant::now();
        let outcome = self.execute(task, seed);
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let (checks, results, verdict, error) = match outcome {
            Ok(o) => {
                let verdict = if o.checks.iter().all(|c| c.pass) {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                (o.checks, o.results, verdict, None)
            }
            Err(e) => (Vec::new(), Map::new(), Verdict::Error, Some(ErrorRecord::from(&e))),
        };
        TaskRecord {
            index,
            name: task
                .name()
                .map(str::to_string)
                .unwrap_or_else(|| format!("{}#{index}", task.kind())),
            task_type: task.kind().to_string(),
            parameters: serde_json::to_value(task).expect("task serializes"),
            seed,
            checks,
            results,
            verdict,
            error,
            wall_time_ms,
        }
    }

    fn rep(&self) -> Result<&NicaRep> {
        if self.setup_failed {
            return Err(setup_error());
        }
        self.rep
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("this task needs a representation".into()))
    }

    fn system(&self) -> Result<DynSystem> {
        if self.setup_failed {
            return Err(setup_error());
        }
        Ok(self
            .system
            .clone()
            .unwrap_or_else(|| DynSystem::trivial(&self.lattice, 1, self.tolerances.tol)))
    }

    fn pair(&self) -> Result<CovariantPair> {
        let rep = self.rep()?.clone();
        let system = self.system()?;
        let sigma = build_sigma(self.sigma.as_ref(), system.algebra(), rep.dim())?;
        CovariantPair::new(system, sigma, rep)
    }

    fn support(&self, input: &SupportInput) -> Result<SupportSet> {
        let pts = self.points(input)?;
        SupportSet::new(&self.lattice, pts)
    }

    fn points(&self, input: &SupportInput) -> Result<Vec<GroupElement>> {
        match &input.points {
            Some(p) => p.iter().map(|c| c.resolve(&self.lattice)).collect(),
            None => self.grid(input.depth.unwrap_or(self.depth)),
        }
    }

    fn grid(&self, depth: u32) -> Result<Vec<GroupElement>> {
        Ok(self.lattice.enumerate_grid(depth, self.caps.grid)?.into_elements())
    }

    fn generators(&self) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for (i, f) in self.lattice.factors().iter().enumerate() {
            for j in 0..f.rank() {
                out.push(self.lattice.generator(i, j));
            }
        }
        out
    }

    fn polynomial(&self, system: &DynSystem, terms: &[TermInput]) -> Result<Polynomial> {
        let terms = terms
            .iter()
            .map(|t| Ok((t.s.resolve(&self.lattice)?, t.a.to_matrix()?)))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(system, terms)
    }

    fn execute(&self, task: &TaskInput, seed: u64) -> Result<Outcome> {
        match task {
            TaskInput::Validate { .. } => self.validate(),
            TaskInput::KernelCheck {
                support, factorization, ..
            } => self.kernel_check(support, *factorization),
            TaskInput::Dilate { support, .. } => self.dilate(support),
            TaskInput::Verify {
                check,
                support,
                elements,
                quads,
                second_depth,
                ..
            } => self.verify(*check, support, elements.as_deref(), quads.as_deref(), *second_depth),
            TaskInput::SchurCheck {
                cases,
                m,
                left_dim,
                right_dim,
                psd,
                ..
            } => self.schur_check(seed, *cases, *m, *left_dim, *right_dim, *psd),
            TaskInput::Induced { support, sigma0, .. } => self.induced(support, sigma0.as_ref()),
            TaskInput::CovariantDilate { support, .. } => self.covariant_dilate(support),
            TaskInput::NormEstimate {
                polynomial,
                samples,
                max_leg_dim,
                support_depth,
                max_attempts,
                max_relative_gap,
                ..
            } => {
                let config = SamplerConfig {
                    seed,
                    samples: *samples,
                    max_leg_dim: *max_leg_dim,
                    support_depth: support_depth.unwrap_or(self.depth),
                    max_attempts: *max_attempts,
                };
                self.norm_estimate(polynomial, &config, *max_relative_gap)
            }
            TaskInput::Gauge {
                polynomial,
                characters,
                random_characters,
                samples,
                max_leg_dim,
                tolerance,
                ..
            } => self.gauge(
                seed,
                polynomial,
                characters.as_deref().unwrap_or(&[]),
                *random_characters,
                *samples,
                *max_leg_dim,
                *tolerance,
            ),
        }
    }

    fn validate(&self) -> Result<Outcome> {
        let tol = self.tolerances.tol;
        let mut out = Outcome::default();
        let report = self.rep()?.validate();
        out.checks.push(Check::le("norm_excess", report.norm_excess.defect, tol));
        out.checks
            .push(Check::le("within_factor_commutator", report.within_factor_commutator.defect, tol));
        out.checks
            .push(Check::le("cross_factor_defect", report.cross_factor_defect.defect, tol));
        out.put("representation", &report);
        if self.system.is_some() {
            let sys = self.system()?.validate();
            out.checks.push(Check::le("unitarity", sys.unitarity.defect, tol));
            out.checks
                .push(Check::le("conjugation_commutation", sys.conjugation_commutation.defect, tol));
            out.checks.push(Check::le("unitality", sys.unitality, tol));
            out.checks.push(Check::le("invariance", sys.invariance_residual, tol));
            out.put("system", &sys);
            let cov = self.pair()?.validate()?;
            out.checks.push(Check::le("covariance", cov.covariance.defect, tol));
            out.checks.push(Check::le(
                "sigma_star_defect",
                cov.sigma_multiplicative.max(cov.sigma_adjoint).max(cov.sigma_unital),
                tol,
            ));
            out.put("covariance", &cov);
        }
        Ok(out)
    }

    fn kernel_check(&self, support: &SupportInput, factorization: bool) -> Result<Outcome> {
        let rep = self.rep()?;
        let pts = self.points(support)?;
        let kp = kernel_positivity(rep, &pts, &self.tolerances, factorization)?;
        let mut out = Outcome::default();
        out.checks.push(Check::ge("min_eigenvalue", kp.min_eigenvalue, -kp.floor));
        if let Some(f) = &kp.factorization {
            out.checks.push(Check::le("factorization_defect", f.product_defect, self.tolerances.tol));
        }
        out.put("points", pts.len());
        out.put("min_eigenvalue", kp.min_eigenvalue);
        out.put("max_eigenvalue", kp.max_eigenvalue);
        out.put("asymmetry", kp.asymmetry);
        out.put("floor", kp.floor);
        out.put("factorization", &kp.factorization);
        Ok(out)
    }

    fn dilate(&self, support: &SupportInput) -> Result<Outcome> {
        let rep = self.rep()?;
        let sup = self.support(support)?;
        let dil = build_dilation_capped(rep, &sup, &self.tolerances, self.caps.gram)?;
        let summary = dil.summary();
        let mut out = Outcome::default();
        out.checks.push(Check::le("embedding_defect", summary.embedding_defect, self.tolerances.tol));
        out.checks.push(Check::ge(
            "gram_min_eigenvalue",
            summary.gram_min_eigenvalue,
            -self.tolerances.psd_floor(summary.raw_dimension),
        ));
        let isometric = rep.is_isometric_on(sup.elements())?;
        if isometric {
            out.checks
                .push(Check::le("rank_minus_dim", summary.rank.abs_diff(summary.hilbert_dim) as f64, 0.0));
        }
        out.put("isometric_on_support", isometric);
        out.put("summary", &summary);
        Ok(out)
    }

    fn default_regularity_elements(&self) -> Vec<GroupElement> {
        let gens = self.generators();
        let mut out = vec![self.lattice.zero()];
        for a in &gens {
            out.push(a.clone());
            out.push(a.neg());
            for b in &gens {
                if a != b {
                    out.push(a.sub(b));
                }
            }
        }
        out
    }

    fn default_quads(&self) -> Vec<(GroupElement, GroupElement, GroupElement, GroupElement)> {
        let gens = self.generators();
        let zero = self.lattice.zero();
        let mut out = Vec::new();
        for a in &gens {
            for b in &gens {
                if self.lattice.single_factor(a) == self.lattice.single_factor(b) {
                    continue;
                }
                let pts = [zero.clone(), a.clone(), b.clone(), a.add(b)];
                for mu in &pts {
                    for nu in &pts {
                        out.push((a.clone(), b.clone(), mu.clone(), nu.clone()));
                    }
                }
            }
        }
        out
    }

    fn verify(
        &self,
        check: VerifyCheck,
        support: &SupportInput,
        elements: Option<&[Coeffs]>,
        quads: Option<&[NicaQuad]>,
        second_depth: Option<u32>,
    ) -> Result<Outcome> {
        let rep = self.rep()?;
        let sup = self.support(support)?;
        let dil = build_dilation_capped(rep, &sup, &self.tolerances, self.caps.gram)?;
        let tol = self.tolerances.tol;
        let resolve = |cs: &[Coeffs]| cs.iter().map(|c| c.resolve(&self.lattice)).collect::<Result<Vec<_>>>();
        let mut out = Outcome::default();
        match check {
            VerifyCheck::Isometry => {
                let shifts = match elements {
                    Some(e) => resolve(e)?,
                    None => self.generators(),
                };
                for s in &shifts {
                    out.checks.push(Check::le(format!("isometry{s}"), dil.verify_isometry(s)?, tol));
                }
            }
            VerifyCheck::Regularity => {
                let gs = match elements {
                    Some(e) => resolve(e)?,
                    None => self.default_regularity_elements(),
                };
                for g in &gs {
                    out.checks.push(Check::le(format!("regularity{g}"), dil.verify_regularity(g)?, tol));
                }
            }
            VerifyCheck::Nica => {
                let qs = match quads {
                    Some(q) => q
                        .iter()
                        .map(|q| {
                            Ok((
                                q.s.resolve(&self.lattice)?,
                                q.t.resolve(&self.lattice)?,
                                q.mu.resolve(&self.lattice)?,
                                q.nu.resolve(&self.lattice)?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?,
                    None => self.default_quads(),
                };
                let mut full = 0.0f64;
                let mut restricted = 0.0f64;
                for (s, t, mu, nu) in &qs {
                    let d = dil.verify_nica_dilation(s, t, mu, nu)?;
                    full = full.max(d.full);
                    restricted = restricted.max(d.restricted.unwrap_or(0.0));
                }
                out.checks.push(Check::le("nica_full", full, tol));
                out.checks.push(Check::le("nica_restricted", restricted, tol));
                out.put("quads", qs.len());
            }
            VerifyCheck::Uniqueness => {
                let depth = second_depth.unwrap_or(support.depth.unwrap_or(self.depth) + 1);
                let other = SupportSet::new(&self.lattice, self.grid(depth)?)?;
                let dil2 = build_dilation_capped(rep, &other, &self.tolerances, self.caps.gram)?;
                let defect = compare_minimal_dilations(&dil, &dil2)?;
                out.checks.push(Check::le("uniqueness", defect, tol));
                out.put("second_support_size", other.len());
            }
        }
        out.put("summary", dil.summary());
        Ok(out)
    }

    fn schur_check(&self, seed: u64, cases: usize, m: usize, left: usize, right: usize, psd: bool) -> Result<Outcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut defect = 0.0f64;
        let mut min_eig = f64::INFINITY;
        for _ in 0..cases {
            let (a, b) = random_commuting_pair(&mut rng, m, left, right, psd);
            let lc = lift_compress_check(&a, &b, self.tolerances.tol, self.caps.schur)?;
            defect = defect.max(lc.defect);
            if psd {
                let p = check_positive(&schur_product(&a, &b)?, self.tolerances.tol, self.tolerances.tol_psd)?;
                min_eig = min_eig.min(p.min_eigenvalue);
            }
        }
        let mut out = Outcome::default();
        out.checks.push(Check::le("lift_compress_defect", defect, self.tolerances.tol));
        if psd && cases > 0 {
            out.checks.push(Check::ge("min_eigenvalue", min_eig, -self.tolerances.tol_psd));
            out.put("min_eigenvalue", min_eig);
        }
        out.put("cases", cases);
        out.put("block_dim", left * right);
        Ok(out)
    }

    fn induced(&self, support: &SupportInput, sigma0: Option<&SigmaInput>) -> Result<Outcome> {
        let system = self.system()?;
        let sigma = build_sigma(Some(sigma0.unwrap_or(&SigmaInput::Identity)), system.algebra(), system.algebra().d())?;
        let sup = self.support(support)?;
        let ind = induced_representation(&system, &sigma, &sup)?;
        let tol = self.tolerances.tol;
        let r = &ind.report;
        let nica = &r.covariance.nica;
        let mut out = Outcome::default();
        out.checks
            .push(Check::le("interior_isometry_defect", r.interior_isometry_defect, tol));
        out.checks.push(Check::le("covariance", r.covariance.covariance.defect, tol));
        out.checks.push(Check::le(
            "nica_defect",
            nica.cross_factor_defect
                .defect
                .max(nica.within_factor_commutator.defect)
                .max(nica.norm_excess.defect),
            tol,
        ));
        out.put("dim", ind.pair.rep().dim());
        out.put("boundary_columns", r.boundary_columns);
        out.put("report", r);
        Ok(out)
    }

    fn covariant_dilate(&self, support: &SupportInput) -> Result<Outcome> {
        let pair = self.pair()?;
        let tol = self.tolerances.tol;
        let cov = pair.validate()?;
        let sup = self.support(support)?;
        let cd = dilate_covariant_pair_capped(&pair, &sup, &self.tolerances, self.caps.gram)?;
        let d = cd.defects();
        let mut out = Outcome::default();
        out.checks.push(Check::le("pair_covariance", cov.covariance.defect, tol));
        out.checks.push(Check::le("restriction", d.restriction, tol));
        out.checks.push(Check::le("covariance", d.covariance.defect, tol));
        out.checks.push(Check::le("multiplicative", d.multiplicative, tol));
        out.checks.push(Check::le("adjoint", d.adjoint, tol));
        out.checks.push(Check::le("unital", d.unital, tol));
        out.checks.push(Check::le("intertwining", d.intertwining, tol));
        out.checks.push(Check::le("well_defined", d.well_defined, tol));
        out.put("summary", cd.dilation().summary());
        out.put("defects", d);
        Ok(out)
    }

    fn norm_estimate(&self, terms: &[TermInput], config: &SamplerConfig, max_gap: Option<f64>) -> Result<Outcome> {
        let system = self.system()?;
        let p = self.polynomial(&system, terms)?;
        let est = estimate_norms(&system, &p, config, &self.tolerances)?;
        let mut out = Outcome::default();
        out.checks
            .push(Check::ge("dilation_gap", est.dilation_gap, -self.tolerances.tol_psd));
        out.checks.push(Check::le(
            "compression_defect",
            est.max_compression_defect,
            self.tolerances.tol_psd,
        ));
        if let Some(g) = max_gap {
            out.checks.push(Check::le("relative_sup_gap", est.relative_gap(), g));
        }
        out.put("seed", est.seed);
        out.put("samples", est.samples);
        out.put("attempts", est.attempts);
        out.put("contractive_sup", est.contractive_sup);
        out.put("isometric_sup", est.isometric_sup);
        out.put("dilation_gap", est.dilation_gap);
        out.put("relative_sup_gap", est.relative_gap());
        out.put("note", "sups are lower bounds on the universal norms");
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn gauge(
        &self,
        seed: u64,
        terms: &[TermInput],
        characters: &[Vec<Vec<f64>>],
        random_characters: usize,
        samples: usize,
        max_leg_dim: usize,
        tolerance: f64,
    ) -> Result<Outcome> {
        let system = self.system()?;
        let p = self.polynomial(&system, terms)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chars = characters
            .iter()
            .map(|t| Character::new(&self.lattice, t.clone()))
            .collect::<Result<Vec<_>>>()?;
        for _ in 0..random_characters {
            chars.push(Character::random(&self.lattice, &mut rng));
        }
        let mut pairs = Vec::new();
        if self.rep.is_some() {
            pairs.push(self.pair()?);
        }
        for _ in 0..samples {
            pairs.push(sample_pair(&system, max_leg_dim, &mut rng)?);
        }
        let mut worst = 0.0f64;
        for pair in &pairs {
            for gamma in &chars {
                worst = worst.max(gauge_check(pair, &p, gamma)?.defect);
            }
        }
        let mut out = Outcome::default();
        out.checks.push(Check::le("gauge_defect", worst, tolerance));
        out.put("pairs", pairs.len());
        out.put("characters", chars.len());
        out.put("max_defect", json!(worst));
        Ok(out)
    }
}
