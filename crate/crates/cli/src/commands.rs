use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use stoqforge::bits::format_bits;
use stoqforge::circuit::{acceptance_probability, amplify, majority_ancillae, Circuit};
use stoqforge::hamiltonian::{
    build_guided_instance, compile, is_stoquastic, pin_embed, solve_diagonal, EpsilonSource,
    GuideDetails, GuideEncoding, GuideOptions, GuidedInstance, Hamiltonian, InstanceClaim,
    PerturbationConfig,
};
use stoqforge::numerics::{
    ground_state, perron_frobenius_check, verify_instance, SolverConfig, SpectralReport,
    Tolerances, VerifyConfig,
};
use stoqforge::subsetstate::SubsetState;

use crate::report::{Report, RunManifest};
use crate::{Cli, Command, Encoding, EXIT_FAIL, EXIT_OK};

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<stoqforge::Error> for CliError {
    fn from(e: stoqforge::Error) -> Self {
        CliError(e.to_string())
    }
}

macro_rules! impl_from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError(e.to_string())
            }
        }
    )*};
}
impl_from_core!(
    stoqforge::CircuitError,
    stoqforge::StateError,
    stoqforge::HamiltonianError,
    stoqforge::NumericsError
);

type Result<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    passed: Option<bool>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.passed {
            Some(false) => EXIT_FAIL,
            _ => EXIT_OK,
        }
    }
}

/// On-disk guided instance: the Hamiltonian and guide live in sibling files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ham: String,
    pub sstate: String,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    #[serde(default)]
    pub gap_budget: f64,
    #[serde(default)]
    pub claim: Option<InstanceClaim>,
    #[serde(default)]
    pub details: Option<GuideDetails>,
}

struct Ctx<'a> {
    cli: &'a Cli,
    manifest: RunManifest,
    started: Instant,
}

impl Ctx<'_> {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes =
            fs::read(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
        self.manifest.record_input(path, &bytes);
        String::from_utf8(bytes)
            .map_err(|_| CliError(format!("{} is not UTF-8 text", path.display())))
    }

    fn circuit(&mut self, path: &Path) -> Result<Circuit> {
        let text = self.read(path)?;
        Circuit::parse(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
    }

    fn hamiltonian(&mut self, path: &Path) -> Result<(Hamiltonian, Vec<(String, String)>)> {
        let text = self.read(path)?;
        let (h, meta) = Hamiltonian::parse_with_meta(&text)
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        self.check_cap(h.n_total(), path)?;
        Ok((h, meta))
    }

    fn subset(&mut self, path: &Path) -> Result<SubsetState> {
        let text = self.read(path)?;
        let s =
            SubsetState::parse(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        self.check_cap(s.n(), path)?;
        Ok(s)
    }

    fn check_cap(&self, qubits: usize, what: &Path) -> Result<()> {
        let cap = self.cli.common.cap_qubits;
        if qubits > cap {
            return Err(CliError(format!(
                "{} acts on {qubits} qubits, above --cap-qubits {cap}",
                what.display()
            )));
        }
        Ok(())
    }

    fn out_path(&self, command: &str) -> Result<&Path> {
        self.cli
            .common
            .out
            .as_deref()
            .ok_or_else(|| CliError(format!("{command} needs --out for its output file")))
    }

    fn solver(&self) -> SolverConfig {
        let mut cfg = SolverConfig {
            seed: self.cli.common.seed,
            ..SolverConfig::default()
        };
        cfg.sparse_cap = cfg.sparse_cap.min(self.cli.common.cap_qubits);
        cfg.dense_cap = cfg.dense_cap.min(self.cli.common.cap_qubits);
        if let (Command::Spectrum(_), Some(tol)) = (&self.cli.command, self.cli.common.tol) {
            cfg.tol = tol;
        }
        cfg
    }

    /// Writes the report to `--out` for report-type commands, to stdout
    /// otherwise.
    fn finish(
        mut self,
        result: Value,
        report_to_out: bool,
        passed: Option<bool>,
    ) -> Result<Outcome> {
        if self.cli.common.record_timing {
            self.manifest.wall_time_ms = Some(self.started.elapsed().as_secs_f64() * 1e3);
        }
        let report = Report {
            manifest: self.manifest,
            result,
        };
        let text = report.render(self.cli.common.format);
        match (&self.cli.common.out, report_to_out) {
            (Some(path), true) => write(path, &text)?,
            _ => print!("{text}"),
        }
        Ok(Outcome { passed })
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports hold finite values")
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let (name, args) = match &cli.command {
        Command::Accept(a) => ("accept", to_value(a)),
        Command::Amplify(a) => ("amplify", to_value(a)),
        Command::Compile(a) => ("compile", to_value(a)),
        Command::Guide(a) => ("guide", to_value(a)),
        Command::Pin(a) => ("pin", to_value(a)),
        Command::SolveDiag(a) => ("solve-diag", to_value(a)),
        Command::Sample(a) => ("sample", to_value(a)),
        Command::Spectrum(a) => ("spectrum", to_value(a)),
        Command::Verify(a) => ("verify", to_value(a)),
    };
    let config = json!({ "args": args, "common": to_value(&cli.common) });
    let mut ctx = Ctx {
        cli,
        manifest: RunManifest::new(name, config, cli.common.seed),
        started: Instant::now(),
    };
    let cap = cli.common.cap_qubits;

    match &cli.command {
        Command::Accept(a) => {
            let c = ctx.circuit(&a.circuit)?;
            let acc = acceptance_probability(&c, &a.input, cap)?;
            let result = json!({
                "input": a.input,
                "basis": c.basis().to_string(),
                "accepted": acc.accepted,
                "total": acc.total,
                "probability": acc.probability(),
            });
            ctx.finish(result, true, None)
        }
        Command::Amplify(a) => {
            let c = ctx.circuit(&a.circuit)?;
            let amplified = amplify(&c, a.rounds, cap)?;
            let out = ctx.out_path("amplify")?.to_path_buf();
            write(&out, &amplified.to_text())?;
            let result = json!({
                "output": out.display().to_string(),
                "rounds": a.rounds,
                "n": amplified.n(),
                "m": amplified.m(),
                "p": amplified.p(),
                "gates": amplified.len(),
                "majority_ancillae": majority_ancillae(a.rounds),
            });
            ctx.finish(result, false, None)
        }
        Command::Compile(a) => {
            let c = ctx.circuit(&a.circuit)?;
            let compiled = compile(&c, &a.input, a.pre_idle, cap)?;
            let out = ctx.out_path("compile")?.to_path_buf();
            write(&out, &compiled.hamiltonian.to_text())?;
            let h = &compiled.hamiltonian;
            let result = json!({
                "output": out.display().to_string(),
                "n_total": h.n_total(),
                "system_qubits": compiled.system_qubits(),
                "clock_len": compiled.clock_len(),
                "terms": h.terms().len(),
                "locality": h.locality(),
                "norm_scale": h.norm_scale(),
            });
            ctx.finish(result, false, None)
        }
        Command::Guide(a) => guide(ctx, a),
        Command::Pin(a) => {
            let (h, _) = ctx.hamiltonian(&a.ham)?;
            ctx.check_cap(h.n_total() + 1, &a.ham)?;
            let pinned = pin_embed(&h)?;
            let out = ctx.out_path("pin")?.to_path_buf();
            let text = format!(
                "{}pinned={}\n",
                pinned.hamiltonian.to_text(),
                pinned.pinned_qubit
            );
            write(&out, &text)?;
            let stoquastic = is_stoquastic(&pinned.hamiltonian, cap)?;
            let result = json!({
                "output": out.display().to_string(),
                "pinned_qubit": pinned.pinned_qubit,
                "n_total": pinned.hamiltonian.n_total(),
                "locality": pinned.hamiltonian.locality(),
                "stoquastic": stoquastic.stoquastic,
            });
            ctx.finish(result, false, None)
        }
        Command::SolveDiag(a) => {
            let (h, _) = ctx.hamiltonian(&a.ham)?;
            let s = ctx.subset(&a.subset)?;
            let sol = solve_diagonal(&h, &s)?;
            let result = json!({
                "energy": sol.energy,
                "scaled_energy": sol.energy * h.norm_scale(),
                "argmin": sol.string,
                "members": s.len(),
            });
            ctx.finish(result, true, None)
        }
        Command::Sample(a) => {
            let s = ctx.subset(&a.state)?;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for z in s.sample(a.shots, cli.common.seed) {
                *counts.entry(format_bits(z, s.n())).or_default() += 1;
            }
            let result = json!({ "shots": a.shots, "counts": counts });
            ctx.finish(result, true, None)
        }
        Command::Spectrum(a) => {
            let (h, _) = ctx.hamiltonian(&a.ham)?;
            let solver = ctx.solver();
            let report = ground_state(&h, a.k, &solver)?;
            ctx.finish(spectrum_value(&report), true, None)
        }
        Command::Verify(a) => verify(ctx, &a.instance),
    }
}

fn spectrum_value(r: &SpectralReport) -> Value {
    let scaled: Vec<f64> = r.eigenvalues.iter().map(|e| e * r.norm_scale).collect();
    json!({
        "eigenvalues": r.eigenvalues,
        "scaled_eigenvalues": scaled,
        "norm_scale": r.norm_scale,
        "gap": r.gap,
        "degenerate": r.degenerate,
        "residual": r.residual,
        "residuals": r.residuals,
        "method": r.method,
        "restarts": r.restarts,
        "perron_frobenius": perron_frobenius_check(&r.ground_vector, 1e-8),
        "ground_vector": r.ground_vector.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
    })
}

fn sibling(instance: &Path, ext: &str) -> PathBuf {
    instance.with_extension(ext)
}

fn guide(mut ctx: Ctx<'_>, a: &crate::GuideArgs) -> Result<Outcome> {
    let cap = ctx.cli.common.cap_qubits;
    let c = ctx.circuit(&a.circuit)?;
    let out = ctx.out_path("guide")?.to_path_buf();
    let k_hat = c.len() + a.pre_idle;
    if !(a.delta_factor >= 1.0) {
        return Err(CliError(format!(
            "--delta-factor must be at least 1, got {}",
            a.delta_factor
        )));
    }
    let cfg = PerturbationConfig {
        slack: a.slack,
        ..PerturbationConfig::at_bound(k_hat, a.error_exponent).scaled(a.delta_factor)
    };
    let solver = ctx.solver();
    let opts = GuideOptions {
        encoding: match a.encoding {
            Encoding::Isometric => GuideEncoding::Isometric,
            Encoding::Expanded => GuideEncoding::Expanded,
        },
        epsilon: match a.epsilon {
            Some(e) => EpsilonSource::Given(e),
            None => EpsilonSource::Measured(solver),
        },
        qubit_cap: cap,
        gap_budget: a.gap_budget,
    };
    let inst = build_guided_instance(&c, &a.input, a.pre_idle, a.truncation, cfg, &opts)?;
    let ham_path = sibling(&out, "ham");
    let state_path = sibling(&out, "sstate");
    write(&ham_path, &inst.ham.to_text())?;
    write(&state_path, &inst.guide.to_text())?;
    let file = InstanceFile {
        ham: file_name(&ham_path),
        sstate: file_name(&state_path),
        a: inst.a,
        b: inst.b,
        delta: inst.delta,
        gap_budget: inst.gap_budget,
        claim: inst.claim,
        details: inst.details.clone(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("finite instance");
    text.push('\n');
    write(&out, &text)?;
    let result = json!({
        "instance": out.display().to_string(),
        "ham": ham_path.display().to_string(),
        "sstate": state_path.display().to_string(),
        "delta_strength": cfg.delta,
        "slack": cfg.slack,
        "a": inst.a,
        "b": inst.b,
        "delta": inst.delta,
        "claim": inst.claim,
        "details": inst.details,
    });
    ctx.finish(result, false, None)
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Loads an instance bundle; relative paths resolve against its directory.
pub fn load_instance(
    ctx_read: &mut dyn FnMut(&Path) -> Result<String>,
    path: &Path,
) -> Result<GuidedInstance> {
    let text = ctx_read(path)?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|e| {
        CliError(format!(
            "instance schema violation in {}: {e}",
            path.display()
        ))
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    let ham_path = base.join(&file.ham);
    let state_path = base.join(&file.sstate);
    let ham = Hamiltonian::parse(&ctx_read(&ham_path)?)
        .map_err(|e| CliError(format!("{}: {e}", ham_path.display())))?;
    let guide = SubsetState::parse(&ctx_read(&state_path)?)
        .map_err(|e| CliError(format!("{}: {e}", state_path.display())))?;
    if !(file.delta > 0.0 && file.delta < 1.0) {
        return Err(CliError(format!(
            "instance delta must lie in (0, 1), got {}",
            file.delta
        )));
    }
    if !(0.0..=1.0).contains(&file.a) || !(0.0..=1.0).contains(&file.b) {
        return Err(CliError(format!(
            "instance thresholds must lie in [0, 1], got a={} b={}",
            file.a, file.b
        )));
    }
    Ok(GuidedInstance {
        ham,
        a: file.a,
        b: file.b,
        guide,
        delta: file.delta,
        gap_budget: file.gap_budget,
        claim: file.claim,
        details: file.details,
    })
}

fn verify(mut ctx: Ctx<'_>, path: &Path) -> Result<Outcome> {
    let inst = {
        let mut read = |p: &Path| ctx.read(p);
        load_instance(&mut read, path)?
    };
    ctx.check_cap(inst.ham.n_total(), path)?;
    let mut tolerances = Tolerances::default();
    if let Some(tol) = ctx.cli.common.tol {
        tolerances.energy = tol;
        tolerances.overlap = tol;
    }
    let cfg = VerifyConfig {
        solver: ctx.solver(),
        tolerances,
    };
    let verdict = verify_instance(&inst, &cfg)?;
    let passed = verdict.pass;
    let mut result = to_value(&verdict);
    result["verdict"] = json!(if passed { "PASS" } else { "FAIL" });
    for claim in &verdict.claims {
        eprintln!(
            "{} {}",
            if claim.pass { "PASS" } else { "FAIL" },
            claim.claim
        );
    }
    ctx.finish(result, true, Some(passed))
}
