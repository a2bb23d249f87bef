//! One function per subcommand. Each writes its outputs through an
//! [`Emitter`] and returns the numerical warnings it collected.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use curvotex::bifurcation::{
    conjecture_sweep, eigenvalue_crossing_speed, mode_quartic, normal_form_contours, perturbation_gallery, probe,
    DegeneracyReport, GalleryBranch, NormalFormSpec, Parity, ProbeOptions, RootChoice,
};
use curvotex::ring::ring_deviation;
use curvotex::spectral::{mode_eigenvalues, mode_spectrum};
use curvotex::stability::{
    alt_critical_value, b_n, bifurcation_value, classify, is_stable, is_stable_alt, stability_range, Classification,
    StabilityVerdict, DEGENERACY_TOL,
};
use curvotex::vortex::{fit_rotation, integrate, Termination};
use curvotex::{Complex64, GreensChoice, RingSpec, VortexConfig, Warning};

use crate::output::{Cell, Emitter, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// What a command hands back to the dispatcher.
pub struct Outcome {
    pub emitter: Emitter,
    pub warnings: Vec<Warning>,
    /// A domain failure discovered after the outputs were written.
    pub domain_failure: Option<String>,
}

impl Outcome {
    fn ok(emitter: Emitter, warnings: Vec<Warning>) -> Self {
        Outcome {
            emitter,
            warnings,
            domain_failure: None,
        }
    }
}

fn write_table(out: &mut Emitter, stem: &str, format: Format, table: &Table, json: &impl Serialize) -> Result<()> {
    match format {
        Format::Csv => out.write(&format!("{stem}.csv"), &table.to_csv()),
        Format::Json => out.json(&format!("{stem}.json"), json),
    }
}

fn join_modes(modes: &[usize]) -> String {
    modes.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

// ---------------------------------------------------------------------------

#[derive(Debug, Args, Serialize)]
pub struct StabilityArgs {
    /// Emit the table of critical values b_n (default when no --x is given).
    #[arg(long)]
    pub table: bool,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 13)]
    pub n_max: usize,
    /// Values of lambda r0^2 at which to classify every n in range.
    #[arg(long = "x", value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    b_n: f64,
    b_n_reciprocal: Option<f64>,
    b_n_pole: f64,
    log_sigma_breakpoints: Vec<f64>,
    range: curvotex::stability::StabilityRange,
}

#[derive(Serialize)]
struct SampleRow {
    n: usize,
    x: f64,
    stable: bool,
    stable_pole: bool,
    verdict: StabilityVerdict,
}

pub fn stability(args: &StabilityArgs, format: Format, mut out: Emitter) -> Result<Outcome> {
    if args.n_min < 4 || args.n_max < args.n_min {
        bail!(curvotex::Error::Range(format!(
            "need 4 <= n-min <= n-max, got {}..{}",
            args.n_min, args.n_max
        )));
    }
    if args.table || args.x.is_empty() {
        let mut table = Table::new(&[
            "n",
            "b_n",
            "b_n_reciprocal",
            "b_n_pole",
            "log_sigma_first",
            "log_sigma_second",
        ]);
        let mut rows = Vec::new();
        for n in args.n_min..=args.n_max {
            let b = b_n(n)?;
            let range = stability_range(n)?;
            let recip = (b > 0.0).then(|| 1.0 / b);
            let bp = &range.breakpoints;
            table.push(vec![
                n.into(),
                b.into(),
                recip.into(),
                alt_critical_value(n).into(),
                bp.first().copied().into(),
                bp.get(1).copied().into(),
            ]);
            rows.push(TableRow {
                n,
                b_n: b,
                b_n_reciprocal: recip,
                b_n_pole: alt_critical_value(n),
                log_sigma_breakpoints: bp.clone(),
                range,
            });
        }
        write_table(&mut out, "stability_table", format, &table, &rows)?;
    }
    if !args.x.is_empty() {
        let mut table = Table::new(&[
            "n",
            "x",
            "classification",
            "failing_modes",
            "degenerate_modes",
            "stable",
            "stable_pole",
        ]);
        let mut rows = Vec::new();
        for n in args.n_min..=args.n_max {
            for &x in &args.x {
                let verdict = classify(n, x, DEGENERACY_TOL)?;
                table.push(vec![
                    n.into(),
                    x.into(),
                    classification_name(verdict.classification).into(),
                    join_modes(&verdict.failing_modes).into(),
                    join_modes(&verdict.degenerate_modes).into(),
                    is_stable(n, x).into(),
                    is_stable_alt(n, x).into(),
                ]);
                rows.push(SampleRow {
                    n,
                    x,
                    stable: is_stable(n, x),
                    stable_pole: is_stable_alt(n, x),
                    verdict,
                });
            }
        }
        write_table(&mut out, "stability_samples", format, &table, &rows)?;
    }
    Ok(Outcome::ok(out, Vec::new()))
}

fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::Stable => "stable",
        Classification::LinearlyUnstable => "linearly_unstable",
        Classification::Degenerate => "degenerate",
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Args, Serialize)]
pub struct BifurcationArgs {
    #[arg(long)]
    pub n: usize,
    /// Emit every n from --n to --n-max.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Serialize)]
struct BifurcationRow {
    n: usize,
    ell: usize,
    x: f64,
    partner: Option<f64>,
    crossing_speed: f64,
    eps_r_residual: f64,
}

pub fn bifurcations(args: &BifurcationArgs, format: Format, mut out: Emitter) -> Result<Outcome> {
    let n_max = args.n_max.unwrap_or(args.n);
    if args.n < 4 || n_max < args.n {
        bail!(curvotex::Error::Range(format!("need 4 <= n <= n-max, got {}..{n_max}", args.n)));
    }
    let mut table = Table::new(&["n", "ell", "x", "partner", "crossing_speed", "eps_r_residual"]);
    let mut rows = Vec::new();
    for n in args.n..=n_max {
        // Largest mode first, matching the usual presentation.
        for ell in (2..=n / 2).rev() {
            let bp = bifurcation_value(n, ell)?;
            let speed = eigenvalue_crossing_speed(n, ell)?;
            let residual = mode_eigenvalues(&RingSpec::from_x(n, 1.0, bp.x)?, ell)?.0;
            table.push(vec![
                n.into(),
                ell.into(),
                bp.x.into(),
                bp.partner.into(),
                speed.into(),
                residual.into(),
            ]);
            rows.push(BifurcationRow {
                n,
                ell,
                x: bp.x,
                partner: bp.partner,
                crossing_speed: speed,
                eps_r_residual: residual,
            });
        }
    }
    write_table(&mut out, "bifurcations", format, &table, &rows)?;
    Ok(Outcome::ok(out, Vec::new()))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreensName {
    Background,
    #[serde(alias = "pole_at_infinity")]
    Pole,
    Antipodal,
}

impl From<GreensName> for GreensChoice {
    fn from(g: GreensName) -> Self {
        match g {
            GreensName::Background => GreensChoice::Background,
            GreensName::Pole => GreensChoice::PoleAtInfinity,
            GreensName::Antipodal => GreensChoice::Antipodal,
        }
    }
}

impl From<GreensChoice> for GreensName {
    fn from(g: GreensChoice) -> Self {
        match g {
            GreensChoice::Background => GreensName::Background,
            GreensChoice::PoleAtInfinity => GreensName::Pole,
            GreensChoice::Antipodal => GreensName::Antipodal,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    /// lambda r0^2.
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = GreensName::Background)]
    pub greens: GreensName,
}

#[derive(Serialize)]
struct SpectrumReport {
    spectrum: curvotex::spectral::ModeSpectrum,
    classification: StabilityVerdict,
    criterion_stable: bool,
}

pub fn spectrum(args: &SpectrumArgs, mut out: Emitter) -> Result<Outcome> {
    let s = RingSpec::new(args.n, args.kappa, args.r0, args.x / (args.r0 * args.r0))?;
    let greens: GreensChoice = args.greens.into();
    let spectrum = mode_spectrum(&s, greens)?;
    let (classification, criterion_stable) = match greens {
        GreensChoice::Background => (classify(args.n, args.x, DEGENERACY_TOL)?, is_stable(args.n, args.x)),
        _ => (verdict_from_spectrum(&spectrum), is_stable_alt(args.n, args.x)),
    };
    out.json(
        "spectrum.json",
        &SpectrumReport {
            spectrum,
            classification,
            criterion_stable,
        },
    )?;
    Ok(Outcome::ok(out, Vec::new()))
}

fn verdict_from_spectrum(sp: &curvotex::spectral::ModeSpectrum) -> StabilityVerdict {
    let size = sp.relevant.iter().fold(1.0f64, |m, e| m.max(e.value.abs()));
    let tol = DEGENERACY_TOL * size;
    let mut failing: Vec<usize> = sp.relevant.iter().filter(|e| e.value < -tol).map(|e| e.ell).collect();
    let mut degenerate: Vec<usize> = sp.relevant.iter().filter(|e| e.value.abs() <= tol).map(|e| e.ell).collect();
    failing.dedup();
    degenerate.dedup();
    let classification = if !failing.is_empty() {
        Classification::LinearlyUnstable
    } else if !degenerate.is_empty() {
        Classification::Degenerate
    } else {
        Classification::Stable
    };
    StabilityVerdict {
        classification,
        failing_modes: failing,
        degenerate_modes: degenerate,
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootName {
    Principal,
    Reciprocal,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    /// Ring size to probe at its bifurcation value.
    #[arg(long, required_unless_present = "sweep", conflicts_with = "sweep")]
    pub n: Option<usize>,
    /// Probe every 4 <= n <= SWEEP instead.
    #[arg(long)]
    pub sweep: Option<usize>,
    /// Compute the reduced quartic of mode ELL (2 <= ELL < n/2) instead.
    #[arg(long, requires = "n")]
    pub ell: Option<usize>,
    #[arg(long, value_enum, default_value_t = RootName::Principal)]
    pub root: RootName,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
}

/// Rings whose degeneracy was settled before: even n up to 12 and the odd
/// cases 5, 7, 9, 11.
fn previously_known(n: usize) -> bool {
    if n % 2 == 0 {
        n <= 12
    } else {
        matches!(n, 5 | 7 | 9 | 11)
    }
}

#[derive(Serialize)]
struct LabelledReport {
    extends_known_results: bool,
    report: DegeneracyReport,
}

#[derive(Serialize)]
struct QuarticReport {
    extends_known_results: bool,
    note: &'static str,
    mode_quartic: curvotex::bifurcation::ModeQuartic,
}

pub fn probe_cmd(args: &ProbeArgs, mut out: Emitter) -> Result<Outcome> {
    let opts = ProbeOptions {
        r0: args.r0,
        root: match args.root {
            RootName::Principal => RootChoice::Principal,
            RootName::Reciprocal => RootChoice::Reciprocal,
        },
        basis_scale: (1.0, 1.0),
    };
    let label = |report: DegeneracyReport| LabelledReport {
        extends_known_results: !previously_known(report.n),
        report,
    };
    let mut warnings = Vec::new();
    if let (Some(n), Some(ell)) = (args.n, args.ell) {
        let q = mode_quartic(n, ell)?;
        out.json(
            "probe_quartic.json",
            &QuarticReport {
                extends_known_results: true,
                note: "reduced quartic f4 = alpha|w|^4 + beta Re w^4 on the critical mode; k = 4 is transcritical iff |alpha| < |beta|",
                mode_quartic: q,
            },
        )?;
    } else if let Some(n_max) = args.sweep {
        let reports = if opts.r0 == 1.0 && opts.root == RootChoice::Principal {
            conjecture_sweep(n_max)?
        } else {
            bail!(curvotex::Error::Range("--sweep uses the principal root with r0 = 1".into()));
        };
        let labelled: Vec<LabelledReport> = reports.into_iter().map(label).collect();
        for r in &labelled {
            warnings.extend(r.report.warnings.iter().cloned());
        }
        let mut table = Table::new(&["n", "parity", "x_star", "verdict", "extends_known_results"]);
        for r in &labelled {
            let parity = match r.report.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            };
            let verdict = serde_json::to_value(r.report.verdict)?;
            table.push(vec![
                r.report.n.into(),
                parity.into(),
                r.report.x_star.into(),
                verdict.as_str().unwrap_or_default().into(),
                r.extends_known_results.into(),
            ]);
        }
        out.write("probe_sweep.csv", &table.to_csv())?;
        out.json("probe_sweep.json", &labelled)?;
    } else if let Some(n) = args.n {
        let report = probe(n, &opts)?;
        warnings.extend(report.warnings.iter().cloned());
        out.json("probe.json", &label(report))?;
    }
    Ok(Outcome::ok(out, warnings))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VortexEntry {
    pub re: f64,
    pub im: f64,
    pub kappa: f64,
}

/// On-disk configuration schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda: f64,
    pub greens: GreensName,
    pub vortices: Vec<VortexEntry>,
}

impl ConfigFile {
    fn to_config(&self) -> curvotex::Result<VortexConfig> {
        VortexConfig::new(
            self.lambda,
            self.vortices.iter().map(|v| Complex64::new(v.re, v.im)).collect(),
            self.vortices.iter().map(|v| v.kappa).collect(),
            self.greens.into(),
        )
    }

    fn from_config(c: &VortexConfig) -> Self {
        ConfigFile {
            lambda: c.lambda,
            greens: c.greens.into(),
            vortices: c
                .positions
                .iter()
                .zip(&c.vorticities)
                .map(|(z, k)| VortexEntry {
                    re: z.re,
                    im: z.im,
                    kappa: *k,
                })
                .collect(),
        }
    }
}

/// Input file that could not be read or parsed.
#[derive(Debug)]
pub struct BadInput(pub String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Configuration JSON: {"lambda", "greens", "vortices": [{"re", "im", "kappa"}]}.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long)]
    pub dt: f64,
    /// Add eps*cos(2 pi ell j/n) to the radius of vortex j.
    #[arg(long, requires = "perturb_eps")]
    pub perturb_mode: Option<usize>,
    #[arg(long, requires = "perturb_mode", allow_negative_numbers = true)]
    pub perturb_eps: Option<f64>,
    /// Write every STRIDE-th step.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Serialize)]
struct SimulationSummary {
    steps: usize,
    t_end: f64,
    completed: bool,
    termination: Termination,
    max_relative_drift: [f64; 4],
    initial_ring_deviation: f64,
    max_ring_deviation: f64,
    final_ring_deviation: f64,
    rotation_rate: f64,
    rotation_periods: f64,
}

fn perturb(c: &mut VortexConfig, ell: usize, eps: f64) {
    let n = c.len();
    for (j, z) in c.positions.iter_mut().enumerate() {
        let dr = eps * (2.0 * PI * (ell * j) as f64 / n as f64).cos();
        *z = Complex64::from_polar(z.norm() + dr, z.arg());
    }
}

pub fn simulate(args: &SimulateArgs, mut out: Emitter) -> Result<Outcome> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| BadInput(format!("reading {}: {e}", args.config.display())))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| BadInput(format!("parsing {}: {e}", args.config.display())))?;
    if args.stride == 0 {
        bail!(BadInput("--stride must be positive".into()));
    }
    let mut config = file.to_config()?;
    if let (Some(ell), Some(eps)) = (args.perturb_mode, args.perturb_eps) {
        perturb(&mut config, ell, eps);
        config.validate()?;
    }
    let rotation_rate = fit_rotation(&config).map(|(w, _)| w).unwrap_or(0.0);
    let traj = integrate(&config, args.t_end, args.dt)?;

    let n = config.len();
    let mut header = vec!["t".to_string()];
    for j in 1..=n {
        header.push(format!("re_{j}"));
        header.push(format!("im_{j}"));
    }
    header.extend(["H", "J_re", "J_im", "J_u"].map(String::from));
    let mut trajectory = Table::new(&header);
    let mut invariants = Table::new(&["t", "H", "J_re", "J_im", "J_u", "ring_deviation"]);
    let deviations: Vec<f64> = traj.states.iter().map(|z| ring_deviation(z)).collect();
    let last = traj.times.len().saturating_sub(1);
    for (i, (t, z)) in traj.times.iter().zip(&traj.states).enumerate() {
        if i % args.stride != 0 && i != last {
            continue;
        }
        let inv = &traj.invariants[i];
        let mut row: Vec<Cell> = vec![(*t).into()];
        for p in z {
            row.push(p.re.into());
            row.push(p.im.into());
        }
        row.extend([inv.h, inv.j_re, inv.j_im, inv.j_u].map(Cell::from));
        trajectory.push(row);
        invariants.push(vec![
            (*t).into(),
            inv.h.into(),
            inv.j_re.into(),
            inv.j_im.into(),
            inv.j_u.into(),
            deviations[i].into(),
        ]);
    }
    out.write("trajectory.csv", &trajectory.to_csv())?;
    out.write("invariants.csv", &invariants.to_csv())?;

    let drift = traj.max_relative_drift();
    let summary = SimulationSummary {
        steps: last,
        t_end: traj.times.last().copied().unwrap_or(0.0),
        completed: traj.completed(),
        termination: traj.termination.clone(),
        max_relative_drift: drift,
        initial_ring_deviation: deviations.first().copied().unwrap_or(0.0),
        max_ring_deviation: deviations.iter().copied().fold(0.0, f64::max),
        final_ring_deviation: deviations.last().copied().unwrap_or(0.0),
        rotation_rate,
        rotation_periods: traj.times.last().copied().unwrap_or(0.0) * rotation_rate.abs() / (2.0 * PI),
    };
    out.json("simulate_summary.json", &summary)?;

    let mut warnings = Vec::new();
    let names = ["H", "J_re", "J_im", "J_u"];
    for (name, d) in names.iter().zip(drift) {
        if d > 1e-8 {
            warnings.push(Warning::new("simulate", format!("relative drift of {name} is {d:.3e}")));
        }
    }
    let domain_failure = (!traj.completed()).then(|| format!("integration stopped early: {:?}", traj.termination));
    Ok(Outcome {
        emitter: out,
        warnings,
        domain_failure,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Args, Serialize)]
pub struct NormalFormArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub u: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Half-width of the sampled square.
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
}

pub fn normal_form(args: &NormalFormArgs, format: Format, mut out: Emitter) -> Result<Outcome> {
    let spec = NormalFormSpec {
        k: args.k,
        alpha: args.alpha,
        beta: args.beta,
        u: args.u,
    };
    let field = normal_form_contours(&spec, args.grid, args.extent)?;
    match format {
        Format::Json => out.json("normal_form.json", &field)?,
        Format::Csv => {
            let mut grid = Table::new(&["x", "y", "f"]);
            for (i, y) in field.coords.iter().enumerate() {
                for (j, x) in field.coords.iter().enumerate() {
                    grid.push(vec![(*x).into(), (*y).into(), field.values[i][j].into()]);
                }
            }
            out.write("normal_form_grid.csv", &grid.to_csv())?;
            let mut crit = Table::new(&["x", "y", "value", "kind", "branch"]);
            for p in &field.critical_points {
                let kind = serde_json::to_value(p.kind)?;
                crit.push(vec![
                    p.x.into(),
                    p.y.into(),
                    p.value.into(),
                    kind.as_str().unwrap_or_default().into(),
                    p.branch.into(),
                ]);
            }
            out.write("normal_form_critical.csv", &crit.to_csv())?;
        }
    }
    Ok(Outcome::ok(out, Vec::new()))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchName {
    M,
    MPrime,
}

#[derive(Debug, Args, Serialize)]
pub struct GalleryArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, value_enum)]
    pub branch: BranchName,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
}

#[derive(Serialize)]
struct SymmetryReport {
    n: usize,
    ell: usize,
    eps: f64,
    branch: GalleryBranch,
    phase: f64,
    k: usize,
    subgroup: Vec<curvotex::bifurcation::DihedralElement>,
    max_symmetry_defect: f64,
    symmetric: bool,
}

pub fn gallery(args: &GalleryArgs, mut out: Emitter) -> Result<Outcome> {
    let s = RingSpec::new(args.n, args.kappa, args.r0, args.lambda)?;
    let branch = match args.branch {
        BranchName::M => GalleryBranch::M,
        BranchName::MPrime => GalleryBranch::MPrime,
    };
    let g = perturbation_gallery(&s, args.ell, args.eps, branch)?;
    out.json("gallery_config.json", &ConfigFile::from_config(&g.config))?;
    let symmetric = g.max_symmetry_defect < 1e-12;
    out.json(
        "gallery_symmetry.json",
        &SymmetryReport {
            n: g.n,
            ell: g.ell,
            eps: g.eps,
            branch: g.branch,
            phase: g.phase,
            k: g.k,
            subgroup: g.subgroup.clone(),
            max_symmetry_defect: g.max_symmetry_defect,
            symmetric,
        },
    )?;
    let warnings = if symmetric {
        Vec::new()
    } else {
        vec![Warning::new(
            "gallery",
            format!("symmetry defect {:.3e}", g.max_symmetry_defect),
        )]
    };
    Ok(Outcome::ok(out, warnings))
}
