//! Registered problem kinds: parameter schemas and the solver behind each.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use sepvar::beams::{beam_char_roots, buckling_critical, buckling_determinant, norm_identity, BeamBc};
use sepvar::geomnd::{ball_radial_mode, disk_membrane_mode, BallBc, BallSpec, DiskMembrane, Parity, RectMembrane};
use sepvar::heat1d::{heat_interval_modes, HeatMedium};
use sepvar::quad::GaussLegendre;
use sepvar::specfun::{integral_sine, zero_table, ZeroFamily, ZeroTable};
use sepvar::sturm::{eigen_solve, Boundary, SlProblem, DEFAULT_STEPS};
use sepvar::varsolve::{brachistochrone_fit, el_residual, solve_transcendental, TransKind, TranscendentalFamily};
use sepvar::waves1d::{gibbs_partial_sum, string_modes, GibbsKind, WaveMedium};
use sepvar::weyl::{weyl_estimate, CountBc, CountDomain, CountingFunction};
use toml::{Table, Value};

use crate::spec::{as_f64, parse_boundary, FieldError, Grid, OutputSpec};
use crate::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ty {
    Real,
    Positive,
    NonNegative,
    Count,
    Choice(&'static [&'static str]),
    Boundary,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Real => write!(f, "real"),
            Ty::Positive => write!(f, "real > 0"),
            Ty::NonNegative => write!(f, "real >= 0"),
            Ty::Count => write!(f, "integer >= 0"),
            Ty::Choice(c) => write!(f, "one of {}", c.join("|")),
            Ty::Boundary => write!(f, "dirichlet|neumann|h >= 0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fallback {
    Required,
    Real(f64),
    Count(usize),
    Word(&'static str),
}

impl fmt::Display for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fallback::Required => write!(f, "required"),
            Fallback::Real(x) => write!(f, "default {x:?}"),
            Fallback::Count(n) => write!(f, "default {n}"),
            Fallback::Word(w) => write!(f, "default {w}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamDef {
    pub name: &'static str,
    pub ty: Ty,
    pub default: Fallback,
    pub help: &'static str,
}

const fn p(name: &'static str, ty: Ty, default: Fallback, help: &'static str) -> ParamDef {
    ParamDef { name, ty, default, help }
}

#[derive(Debug, Clone, PartialEq)]
enum PVal {
    Real(f64),
    Count(usize),
    Word(String),
    Bc(Boundary),
}

/// Parameters checked against a kind's schema, defaults filled in.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<&'static str, PVal>,
}

impl Params {
    fn real(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(PVal::Real(x)) => *x,
            other => panic!("parameter {name} is not real: {other:?}"),
        }
    }

    fn count(&self, name: &str) -> usize {
        match self.values.get(name) {
            Some(PVal::Count(n)) => *n,
            other => panic!("parameter {name} is not a count: {other:?}"),
        }
    }

    fn word(&self, name: &str) -> &str {
        match self.values.get(name) {
            Some(PVal::Word(w)) => w,
            other => panic!("parameter {name} is not a word: {other:?}"),
        }
    }

    fn bc(&self, name: &str) -> Boundary {
        match self.values.get(name) {
            Some(PVal::Bc(b)) => *b,
            other => panic!("parameter {name} is not a boundary: {other:?}"),
        }
    }
}

fn check_value(def: &ParamDef, v: &Value) -> Result<PVal, FieldError> {
    let path = format!("parameters.{}", def.name);
    let real = |ok: fn(f64) -> bool, want: &str| {
        as_f64(v)
            .filter(|x| x.is_finite())
            .ok_or_else(|| FieldError::new(&path, "expected a finite number"))
            .and_then(|x| if ok(x) { Ok(PVal::Real(x)) } else { Err(FieldError::new(&path, format!("must be {want}, got {x}"))) })
    };
    match def.ty {
        Ty::Real => real(|_| true, "real"),
        Ty::Positive => real(|x| x > 0.0, "positive"),
        Ty::NonNegative => real(|x| x >= 0.0, "non-negative"),
        Ty::Count => match v {
            Value::Integer(i) if *i >= 0 => Ok(PVal::Count(*i as usize)),
            Value::Integer(i) => Err(FieldError::new(&path, format!("must be non-negative, got {i}"))),
            _ => Err(FieldError::new(&path, "expected an integer")),
        },
        Ty::Choice(options) => match v.as_str() {
            Some(s) if options.contains(&s) => Ok(PVal::Word(s.to_string())),
            _ => Err(FieldError::new(&path, format!("expected one of {}", options.join(", ")))),
        },
        Ty::Boundary => parse_boundary(v)
            .map(PVal::Bc)
            .ok_or_else(|| FieldError::new(&path, "expected \"dirichlet\", \"neumann\" or a number h >= 0")),
    }
}

fn default_value(def: &ParamDef) -> Option<PVal> {
    match (def.default, def.ty) {
        (Fallback::Required, _) => None,
        (Fallback::Real(x), _) => Some(PVal::Real(x)),
        (Fallback::Count(n), _) => Some(PVal::Count(n)),
        (Fallback::Word(w), Ty::Boundary) => parse_boundary(&Value::String(w.into())).map(PVal::Bc),
        (Fallback::Word(w), _) => Some(PVal::Word(w.to_string())),
    }
}

/// Inputs handed to a solver.
pub struct Ctx {
    pub params: Params,
    pub truncation: Option<usize>,
    pub grid: Option<Grid>,
}

impl Ctx {
    fn truncation_or(&self, n: usize) -> usize {
        self.truncation.unwrap_or(n)
    }

    fn grid_or(&self, start: f64, stop: f64, points: usize) -> Grid {
        self.grid.unwrap_or(Grid { start, stop, points })
    }
}

#[derive(Debug)]
pub enum RunError {
    Field(FieldError),
    Solver(sepvar::Error),
}

impl From<sepvar::Error> for RunError {
    fn from(e: sepvar::Error) -> Self {
        RunError::Solver(e)
    }
}

impl From<FieldError> for RunError {
    fn from(e: FieldError) -> Self {
        RunError::Field(e)
    }
}

type Runner = fn(&Ctx) -> Result<ResultTable, RunError>;

pub struct Kind {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamDef],
    pub truncation: &'static str,
    run: Runner,
}

impl Kind {
    pub fn validate(&self, raw: &Table) -> Result<Params, FieldError> {
        for key in raw.keys() {
            if !self.params.iter().any(|d| d.name == key) {
                let known: Vec<&str> = self.params.iter().map(|d| d.name).collect();
                return Err(FieldError::new(
                    format!("parameters.{key}"),
                    format!("unknown parameter for {} (expected one of: {})", self.name, known.join(", ")),
                ));
            }
        }
        let mut values = BTreeMap::new();
        for def in self.params {
            let v = match raw.get(def.name) {
                Some(v) => check_value(def, v)?,
                None => default_value(def).ok_or_else(|| FieldError::new(format!("parameters.{}", def.name), "required"))?,
            };
            values.insert(def.name, v);
        }
        Ok(Params { values })
    }

    pub fn run(&self, raw: &Table, output: &OutputSpec) -> Result<ResultTable, RunError> {
        let params = self.validate(raw)?;
        let ctx = Ctx {
            params,
            truncation: output.truncation,
            grid: output.grid,
        };
        let table = (self.run)(&ctx)?;
        Ok(table.meta("kind", self.name))
    }
}

pub fn lookup(name: &str) -> Option<&'static Kind> {
    KINDS.iter().find(|k| k.name == name)
}

/// Registered kinds in lexicographic order, optionally filtered by substring.
pub fn list(filter: Option<&str>) -> Vec<&'static Kind> {
    let mut out: Vec<&'static Kind> = KINDS.iter().filter(|k| filter.is_none_or(|f| k.name.contains(f))).collect();
    out.sort_by_key(|k| k.name);
    out
}

fn seq(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64).collect()
}

fn root_table(family: ZeroFamily, order: u32, n: usize) -> Result<Vec<f64>, RunError> {
    Ok(zero_table(family, order, n)?.roots[..n].to_vec())
}

fn ball_roots(c: &Ctx) -> Result<ResultTable, RunError> {
    let (r, a2, h) = (c.params.real("radius"), c.params.real("a2"), c.params.real("h"));
    let bc = match c.params.word("bc") {
        "dirichlet" => BallBc::Dirichlet,
        "neumann" => BallBc::Neumann,
        _ if h > 0.0 => BallBc::Robin(h),
        _ => return Err(FieldError::new("parameters.h", "must be positive for a robin surface").into()),
    };
    let spec = BallSpec::new(r, bc, a2)?;
    let n = c.truncation_or(5);
    let modes: Vec<_> = (1..=n).map(|k| ball_radial_mode(&spec, k)).collect::<Result<_, _>>()?;
    let gamma: Vec<f64> = modes.iter().map(|m| m.gamma).collect();
    let residual: Vec<f64> = gamma
        .iter()
        .map(|&g| match bc {
            BallBc::Dirichlet => g.sin(),
            BallBc::Neumann => g.tan() - g,
            BallBc::Robin(h) => g * g.cos() + (h * r - 1.0) * g.sin(),
        })
        .collect();
    Ok(ResultTable::new()
        .column("k", seq(n))
        .column("gamma", gamma)
        .column("lambda", modes.iter().map(|m| m.lambda).collect())
        .column("residual", residual)
        .meta("truncation", n)
        .meta("root_tolerance", ZeroTable::TOL))
}

fn beam_bc(name: &str) -> BeamBc {
    match name {
        "clamped_clamped" => BeamBc::ClampedClamped,
        "clamped_free" => BeamBc::ClampedFree,
        "pinned_pinned" => BeamBc::PinnedPinned,
        "clamped_pinned" => BeamBc::ClampedPinned,
        _ => BeamBc::FreeFree,
    }
}

fn beam_buckling(c: &Ctx) -> Result<ResultTable, RunError> {
    let bc = beam_bc(c.params.word("bc"));
    let (e, j, l) = (c.params.real("e"), c.params.real("j"), c.params.real("l"));
    let f = buckling_critical(bc, e, j, l)?;
    let sigma = l * (f / (e * j)).sqrt();
    Ok(ResultTable::new()
        .column("f_cr", vec![f])
        .column("sigma", vec![sigma])
        .column("euler_ratio", vec![f / (PI * PI * e * j / (l * l))])
        .column("determinant", vec![buckling_determinant(bc, sigma)?])
        .meta("truncation", 1)
        .meta("root_tolerance", 1e-15))
}

fn beam_roots(c: &Ctx) -> Result<ResultTable, RunError> {
    let bc = beam_bc(c.params.word("bc"));
    let l = c.params.real("l");
    let n = c.truncation_or(3);
    let mu = beam_char_roots(bc, n)?;
    Ok(ResultTable::new()
        .column("k", seq(n))
        .column("mu", mu.clone())
        .column("residual", mu.iter().map(|&m| bc.residual(m)).collect())
        .column("norm_sq", mu.iter().map(|&m| norm_identity(bc, m, l)).collect())
        .meta("truncation", n)
        .meta("rigid_modes", bc.rigid_modes())
        .meta("root_tolerance", ZeroTable::TOL))
}

fn bessel_zeros(c: &Ctx) -> Result<ResultTable, RunError> {
    let family = match c.params.word("family") {
        "j" => ZeroFamily::BesselJ,
        "jprime" => ZeroFamily::BesselJPrime,
        _ => ZeroFamily::SphericalJ,
    };
    let order = u32::try_from(c.params.count("order")).map_err(|_| FieldError::new("parameters.order", "too large"))?;
    let n = c.truncation_or(5);
    let roots = root_table(family, order, n)?;
    Ok(ResultTable::new()
        .column("k", seq(n))
        .column("root", roots.clone())
        .column("residual", roots.iter().map(|&x| family.residual(order, x)).collect())
        .meta("truncation", n)
        .meta("root_tolerance", ZeroTable::TOL))
}

/// Largest partial sum on the first lobe (0, 4l/(N+1)]: a coarse scan
/// refined by golden-section search.
fn gibbs_peak(d: f64, l: f64, n: usize, kind: GibbsKind) -> Result<(f64, f64), sepvar::Error> {
    let s = |x: f64| gibbs_partial_sum(d, l, n, x, kind);
    let width = 4.0 * l / (n as f64 + 1.0);
    let samples = 200;
    let h = width / samples as f64;
    let mut best = (h, s(h)?);
    for i in 2..=samples {
        let v = s(h * i as f64)?;
        if v > best.1 {
            best = (h * i as f64, v);
        }
    }
    let (mut a, mut b) = ((best.0 - h).max(0.0), best.0 + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if s(x1)? >= s(x2)? {
            b = x2;
        } else {
            a = x1;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, s(x)?))
}

fn gibbs_scan(c: &Ctx) -> Result<ResultTable, RunError> {
    let (d, l) = (c.params.real("d"), c.params.real("l"));
    let kind = if c.params.word("sum") == "fejer" { GibbsKind::Fejer } else { GibbsKind::Dirichlet };
    let n_max = c.truncation_or(200);
    let mut ns: Vec<usize> = [10, 20, 50, 100, 200, 500, 1000, 2000, 5000].into_iter().filter(|&k| k < n_max).collect();
    ns.push(n_max);
    let limit = 2.0 * integral_sine(PI)? / PI;
    let peaks: Vec<(f64, f64)> = ns.iter().map(|&n| gibbs_peak(d, l, n, kind)).collect::<Result<_, _>>()?;
    let overshoot: Vec<f64> = peaks.iter().map(|p| p.1 / d).collect();
    Ok(ResultTable::new()
        .column("n", ns.iter().map(|&n| n as f64).collect())
        .column("x_peak", peaks.iter().map(|p| p.0).collect())
        .column("peak", peaks.iter().map(|p| p.1).collect())
        .column("overshoot", overshoot.clone())
        .column("gap_to_limit", overshoot.iter().map(|o| (o - limit).abs()).collect())
        .meta("truncation", n_max)
        .meta("overshoot_limit", limit))
}

fn heat_interval(c: &Ctx) -> Result<ResultTable, RunError> {
    let (a2, l, t, amp) = (c.params.real("a2"), c.params.real("l"), c.params.real("t"), c.params.real("amplitude"));
    let medium = HeatMedium::with_sink(a2, c.params.real("sink"))?;
    let (left, right) = (c.params.bc("left"), c.params.bc("right"));
    let initial = c.params.word("initial").to_string();
    let f = move |x: f64| -> f64 {
        match initial.as_str() {
            "parabola" => amp * 4.0 * x * (l - x) / (l * l),
            "sine" => amp * (PI * x / l).sin(),
            _ => amp,
        }
    };
    let n = c.truncation_or(64);
    let sol = heat_interval_modes(medium, l, left, right, &f, None, n)?;
    let grid = c.grid_or(0.0, l, 21);
    let xs = grid.values();
    if let Some(x) = xs.iter().find(|x| !(0.0..=l).contains(*x)) {
        return Err(FieldError::new("output.grid", format!("sample {x} lies outside [0, {l}]")).into());
    }
    let tail = sol.tail_bound(t);
    Ok(ResultTable::new()
        .column("x", xs.clone())
        .column("u", xs.iter().map(|&x| sol.value(x, t)).collect())
        .column("tail_bound", vec![tail; xs.len()])
        .meta("truncation", n)
        .meta("t", t)
        .meta("required_modes", sol.required_modes(t)))
}

fn membrane_disk(c: &Ctx) -> Result<ResultTable, RunError> {
    let disk = DiskMembrane::new(c.params.real("radius"), c.params.real("a"), c.params.real("rho"))?;
    let m = u32::try_from(c.params.count("m")).map_err(|_| FieldError::new("parameters.m", "too large"))?;
    let n = c.truncation_or(5);
    let modes: Vec<_> = (1..=n).map(|k| disk_membrane_mode(&disk, m, k, Parity::Cos)).collect::<Result<_, _>>()?;
    Ok(ResultTable::new()
        .column("k", seq(n))
        .column("alpha", modes.iter().map(|d| d.alpha).collect())
        .column("lambda", modes.iter().map(|d| d.lambda).collect())
        .column("omega", modes.iter().map(|d| d.omega).collect())
        .meta("truncation", n)
        .meta("root_tolerance", ZeroTable::TOL))
}

fn membrane_rect(c: &Ctx) -> Result<ResultTable, RunError> {
    let rect = RectMembrane::fixed(c.params.real("l1"), c.params.real("l2"), c.params.real("a"), c.params.real("rho"))?;
    let n = c.truncation_or(10);
    let modes = rect.spectrum(n);
    let mult: Vec<f64> = modes.iter().map(|md| 1.0 + rect.degenerate_partners(md.m, md.n, 4 * n).len() as f64).collect();
    Ok(ResultTable::new()
        .column("m", modes.iter().map(|md| md.m as f64).collect())
        .column("n", modes.iter().map(|md| md.n as f64).collect())
        .column("lambda", modes.iter().map(|md| md.lambda).collect())
        .column("omega", modes.iter().map(|md| md.omega).collect())
        .column("multiplicity", mult)
        .meta("truncation", n)
        .meta("relative_tolerance", 1e-12))
}

fn string_energy(c: &Ctx) -> Result<ResultTable, RunError> {
    let (a, l, rho, height) = (c.params.real("a"), c.params.real("l"), c.params.real("rho"), c.params.real("height"));
    let pluck = c.params.real("pluck");
    if !(pluck > 0.0 && pluck < 1.0) {
        return Err(FieldError::new("parameters.pluck", format!("must lie in (0, 1), got {pluck}")).into());
    }
    let x0 = pluck * l;
    let triangle = c.params.word("shape") == "triangle";
    let u0 = move |x: f64| {
        if triangle {
            if x <= x0 {
                height * x / x0
            } else {
                height * (l - x) / (l - x0)
            }
        } else {
            4.0 * height * x * (l - x) / (l * l)
        }
    };
    let du0 = move |x: f64| {
        if triangle {
            if x <= x0 {
                height / x0
            } else {
                -height / (l - x0)
            }
        } else {
            4.0 * height * (l - 2.0 * x) / (l * l)
        }
    };
    let zero = |_: f64| 0.0;
    let n = c.truncation_or(64);
    let sol = string_modes(WaveMedium::new(a, l, 0.0, rho)?, Boundary::Dirichlet, Boundary::Dirichlet, &u0, &zero, n)?;
    let gl = GaussLegendre::new(20);
    let grad2 = |x: f64| du0(x).powi(2);
    let quad = if triangle { gl.composite(grad2, 0.0, x0, 8) + gl.composite(grad2, x0, l, 8) } else { gl.composite(grad2, 0.0, l, 8) };
    let total = 0.5 * rho * a * a * quad;
    let energies: Vec<f64> = (1..=n).map(|k| sol.mode_energy(k, 0.0)).collect();
    let mut acc = 0.0;
    let tail: Vec<f64> = energies
        .iter()
        .map(|e| {
            acc += e;
            ((total - acc) / total).max(0.0)
        })
        .collect();
    Ok(ResultTable::new()
        .column("n", seq(n))
        .column("omega", (1..=n).map(|k| PI * a * k as f64 / l).collect())
        .column("energy", energies.clone())
        .column("fraction", energies.iter().map(|e| e / total).collect())
        .column("tail_fraction", tail)
        .meta("truncation", n)
        .meta("total_energy", total)
        .meta("modal_energy", sol.energy(0.0)))
}

fn sturm_eigen(c: &Ctx) -> Result<ResultTable, RunError> {
    let (pp, q, rho, l) = (c.params.real("p"), c.params.real("q"), c.params.real("rho"), c.params.real("length"));
    let (left, right) = (c.params.bc("left"), c.params.bc("right"));
    let steps = c.params.count("steps");
    if steps < 8 || steps % 2 == 1 {
        return Err(FieldError::new("parameters.steps", format!("must be even and >= 8, got {steps}")).into());
    }
    let coef = |v: f64| sepvar::func(move |_| v);
    let problem = SlProblem::with_steps(coef(pp), coef(q), coef(rho), l, left, right, steps)?;
    let fine = SlProblem::with_steps(coef(pp), coef(q), coef(rho), l, left, right, 2 * steps)?;
    let n = c.truncation_or(8);
    let basis = eigen_solve(&problem, n)?;
    let check = eigen_solve(&fine, n)?;
    let diff: Vec<f64> = basis.eigenvalues.iter().zip(&check.eigenvalues).map(|(a, b)| (a - b).abs()).collect();
    Ok(ResultTable::new()
        .column("n", seq(n))
        .column("lambda", basis.eigenvalues.clone())
        .column("nodes", basis.node_counts.iter().map(|&k| k as f64).collect())
        .column("step_halving_diff", diff)
        .meta("truncation", n)
        .meta("steps", steps))
}

fn variational_brachistochrone(c: &Ctx) -> Result<ResultTable, RunError> {
    let (l, h, g) = (c.params.real("l"), c.params.real("h"), c.params.real("g"));
    let fit = brachistochrone_fit(l, h, g)?;
    let grid = c.grid_or(0.0, l, 21);
    let xs = grid.values();
    if let Some(x) = xs.iter().find(|x| !(0.0..=l).contains(*x)) {
        return Err(FieldError::new("output.grid", format!("sample {x} lies outside [0, {l}]")).into());
    }
    let phis: Vec<f64> = xs.iter().map(|&x| fit.phi_at(x)).collect::<Result<_, _>>()?;
    let ys: Vec<f64> = phis.iter().map(|&p| fit.y(p)).collect();
    let time = |_: f64, y: f64, yp: f64| (1.0 + yp * yp).sqrt() / y.sqrt();
    let y_of_x = |x: f64| fit.y_of_x(x).unwrap_or(f64::NAN);
    let interior: Vec<f64> = (2..=18).map(|i| l * i as f64 / 20.0).filter(|&x| fit.y_of_x(x).is_ok_and(|y| y > 0.0)).collect();
    let residual = if interior.is_empty() { 0.0 } else { el_residual(&time, &y_of_x, &interior)? };
    Ok(ResultTable::new()
        .column("x", xs)
        .column("y", ys)
        .column("phi", phis)
        .meta("truncation", 1)
        .meta("phi2", fit.phi2)
        .meta("c1", fit.c1)
        .meta("time", fit.time)
        .meta("el_residual", residual))
}

fn variational_roots(c: &Ctx) -> Result<ResultTable, RunError> {
    let kind = match c.params.word("family") {
        "cosh" => TransKind::Cosh,
        "sinh" => TransKind::Sinh,
        _ => TransKind::Arcsin,
    };
    let alpha = c.params.real("alpha");
    let set = solve_transcendental(TranscendentalFamily { kind, alpha })?;
    let lhs = |u: f64| match kind {
        TransKind::Cosh => u.cosh(),
        TransKind::Sinh => u.sinh(),
        TransKind::Arcsin => u.asin(),
    };
    let us: Vec<f64> = set.roots.iter().map(|r| r.u).collect();
    let energies = if set.energies.len() == us.len() { set.energies.clone() } else { vec![0.0; us.len()] };
    let mut t = ResultTable::new()
        .column("u", us.clone())
        .column("tangent", set.roots.iter().map(|r| f64::from(u8::from(r.tangent))).collect())
        .column("physical", (0..us.len()).map(|i| f64::from(u8::from(set.physical == Some(i)))).collect())
        .column("energy", energies)
        .column("residual", us.iter().map(|&u| (lhs(u) - alpha * u).abs()).collect())
        .meta("truncation", us.len())
        .meta("class", format!("{:?}", set.class))
        .meta("trivial_root", set.trivial);
    if let Some(a) = set.alpha_star {
        t = t.meta("alpha_star", a);
    }
    Ok(t)
}

fn weyl_count(c: &Ctx) -> Result<ResultTable, RunError> {
    let (l1, l2, a) = (c.params.real("l1"), c.params.real("l2"), c.params.real("a"));
    let domain = match c.params.word("domain") {
        "square" => CountDomain::Square(l1),
        "rect" => CountDomain::Rect(l1, l2),
        _ => CountDomain::Cube(l1),
    };
    let bc = if c.params.word("bc") == "neumann" { CountBc::Neumann } else { CountBc::Dirichlet };
    let grid = c.grid_or(100.0, 1e4, 12);
    let lams = grid.values();
    if let Some(x) = lams.iter().find(|x| **x <= 0.0) {
        return Err(FieldError::new("output.grid", format!("eigenvalue bound {x} must be positive")).into());
    }
    let lmax = lams.iter().fold(0.0f64, |m, &x| m.max(x));
    let cf = CountingFunction::new(domain, bc, a, lmax)?;
    let counts: Vec<f64> = lams.iter().map(|&x| cf.count_exact(x).map(|n| n as f64)).collect::<Result<_, _>>()?;
    let weyl: Vec<f64> = lams.iter().map(|&x| weyl_estimate(cf.measure(), cf.dimension(), a, x)).collect::<Result<_, _>>()?;
    let n_top = counts.last().copied().unwrap_or(0.0) as u64;
    Ok(ResultTable::new()
        .column("lambda", lams)
        .column("count", counts.clone())
        .column("weyl", weyl.clone())
        .column("ratio", counts.iter().zip(&weyl).map(|(n, w)| if *w > 0.0 { n / w } else { 0.0 }).collect())
        .column("weyl_gap", counts.iter().zip(&weyl).map(|(n, w)| (n - w).abs()).collect())
        .meta("truncation", n_top)
        .meta("count_error", 0.0))
}

use Fallback::{Count as C, Real as R, Required as Req, Word as W};

const BEAM_BCS: &[&str] = &["clamped_clamped", "clamped_free", "pinned_pinned", "clamped_pinned", "free_free"];

static KINDS: &[Kind] = &[
    Kind {
        name: "ball.roots",
        summary: "radial roots of the heat problem in a ball",
        params: &[
            p("radius", Ty::Positive, R(1.0), "ball radius R"),
            p("bc", Ty::Choice(&["dirichlet", "neumann", "robin"]), W("neumann"), "surface condition"),
            p("h", Ty::NonNegative, R(1.0), "Robin coefficient in u_r + h u = 0"),
            p("a2", Ty::Positive, R(1.0), "diffusivity"),
        ],
        truncation: "number of roots (default 5)",
        run: ball_roots,
    },
    Kind {
        name: "beam.buckling",
        summary: "Euler critical load of a compressed beam",
        params: &[
            p("bc", Ty::Choice(&["clamped_clamped", "clamped_free", "pinned_pinned", "clamped_pinned"]), W("pinned_pinned"), "end conditions"),
            p("e", Ty::Positive, R(1.0), "Young's modulus E"),
            p("j", Ty::Positive, R(1.0), "second moment of area J"),
            p("l", Ty::Positive, R(1.0), "length"),
        ],
        truncation: "unused (always 1)",
        run: beam_buckling,
    },
    Kind {
        name: "beam.roots",
        summary: "roots of the beam frequency equation",
        params: &[
            p("bc", Ty::Choice(BEAM_BCS), W("clamped_clamped"), "end conditions"),
            p("l", Ty::Positive, R(1.0), "length used for the norm column"),
        ],
        truncation: "number of roots (default 3)",
        run: beam_roots,
    },
    Kind {
        name: "bessel.zeros",
        summary: "positive zeros of J_m, J_m' or j_n",
        params: &[
            p("family", Ty::Choice(&["j", "jprime", "spherical_j"]), W("j"), "function whose zeros are listed"),
            p("order", Ty::Count, C(0), "order m or n"),
        ],
        truncation: "number of zeros (default 5)",
        run: bessel_zeros,
    },
    Kind {
        name: "gibbs.scan",
        summary: "overshoot of sawtooth partial sums near the jump",
        params: &[
            p("d", Ty::Positive, R(1.0), "half jump"),
            p("l", Ty::Positive, R(1.0), "half period"),
            p("sum", Ty::Choice(&["dirichlet", "fejer"]), W("dirichlet"), "partial sums or their arithmetic means"),
        ],
        truncation: "largest number of terms (default 200)",
        run: gibbs_scan,
    },
    Kind {
        name: "heat.interval",
        summary: "temperature on an interval by eigenfunction expansion",
        params: &[
            p("a2", Ty::Positive, R(1.0), "diffusivity"),
            p("l", Ty::Positive, R(1.0), "length"),
            p("left", Ty::Boundary, W("dirichlet"), "condition at x = 0"),
            p("right", Ty::Boundary, W("dirichlet"), "condition at x = l"),
            p("initial", Ty::Choice(&["uniform", "parabola", "sine"]), W("uniform"), "initial profile"),
            p("amplitude", Ty::Real, R(1.0), "initial amplitude"),
            p("sink", Ty::NonNegative, R(0.0), "sink rate q"),
            p("t", Ty::Positive, Req, "time"),
        ],
        truncation: "number of modes (default 64); grid samples x (default [0, l], 21 points)",
        run: heat_interval,
    },
    Kind {
        name: "membrane.disk",
        summary: "natural frequencies of a fixed circular membrane",
        params: &[
            p("radius", Ty::Positive, R(1.0), "radius R"),
            p("a", Ty::Positive, R(1.0), "wave speed"),
            p("rho", Ty::Positive, R(1.0), "surface density"),
            p("m", Ty::Count, C(0), "angular order"),
        ],
        truncation: "number of radial modes (default 5)",
        run: membrane_disk,
    },
    Kind {
        name: "membrane.rect",
        summary: "lowest modes of a fixed rectangular membrane",
        params: &[
            p("l1", Ty::Positive, R(1.0), "side along x"),
            p("l2", Ty::Positive, R(1.0), "side along y"),
            p("a", Ty::Positive, R(1.0), "wave speed"),
            p("rho", Ty::Positive, R(1.0), "surface density"),
        ],
        truncation: "number of modes (default 10)",
        run: membrane_rect,
    },
    Kind {
        name: "string.energy",
        summary: "modal energies of a plucked string",
        params: &[
            p("a", Ty::Positive, R(1.0), "wave speed"),
            p("l", Ty::Positive, R(1.0), "length"),
            p("rho", Ty::Positive, R(1.0), "linear density"),
            p("height", Ty::Positive, R(0.1), "initial displacement at the pluck"),
            p("shape", Ty::Choice(&["parabola", "triangle"]), W("parabola"), "initial shape"),
            p("pluck", Ty::Positive, R(0.5), "pluck position as a fraction of l (triangle)"),
        ],
        truncation: "number of modes (default 64)",
        run: string_energy,
    },
    Kind {
        name: "sturm.eigen",
        summary: "eigenvalues of -(pX')' + qX = lambda rho X with constant coefficients",
        params: &[
            p("p", Ty::Positive, R(1.0), "stiffness p"),
            p("q", Ty::NonNegative, R(0.0), "potential q"),
            p("rho", Ty::Positive, R(1.0), "weight rho"),
            p("length", Ty::Positive, R(1.0), "interval length"),
            p("left", Ty::Boundary, W("dirichlet"), "condition at x = 0"),
            p("right", Ty::Boundary, W("dirichlet"), "condition at x = l"),
            p("steps", Ty::Count, C(DEFAULT_STEPS), "integration steps"),
        ],
        truncation: "number of eigenvalues (default 8)",
        run: sturm_eigen,
    },
    Kind {
        name: "variational.brachistochrone",
        summary: "cycloid of fastest descent from the origin to (l, h)",
        params: &[
            p("l", Ty::Positive, R(1.0), "horizontal distance"),
            p("h", Ty::Positive, R(1.0), "drop, measured downwards"),
            p("g", Ty::Positive, R(9.81), "gravity"),
        ],
        truncation: "unused (always 1); grid samples x (default [0, l], 21 points)",
        run: variational_brachistochrone,
    },
    Kind {
        name: "variational.roots",
        summary: "roots of ch u = alpha u, sh u = alpha u or arcsin u = alpha u",
        params: &[
            p("family", Ty::Choice(&["cosh", "sinh", "arcsin"]), W("cosh"), "left-hand side"),
            p("alpha", Ty::Positive, Req, "slope alpha"),
        ],
        truncation: "unused (number of roots found)",
        run: variational_roots,
    },
    Kind {
        name: "weyl.count",
        summary: "exact eigenvalue counts against the Weyl estimate",
        params: &[
            p("domain", Ty::Choice(&["square", "rect", "cube"]), W("square"), "domain shape"),
            p("l1", Ty::Positive, R(1.0), "side (first side of a rectangle)"),
            p("l2", Ty::Positive, R(1.0), "second side of a rectangle"),
            p("bc", Ty::Choice(&["dirichlet", "neumann"]), W("dirichlet"), "edge condition"),
            p("a", Ty::Positive, R(1.0), "wave speed"),
        ],
        truncation: "unused (count at the largest lambda is reported); grid samples lambda (default [100, 1e4], 12 points)",
        run: weyl_count,
    },
];
