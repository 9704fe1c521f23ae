use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use qsc_core::cocycle::{exp_inner, full_matrix_element, StepFunction};
use qsc_core::io::{self as qio, ModelSpec};
use qsc_core::opcore::{inner, vec_norm, C64};
use qsc_core::reconstruct::{sample_form_defect, screen_family, trotter_kato_pipeline};
use qsc_core::semigroups::{coords_from_f, dual_family};
use qsc_core::toyfock::{discrete_exp_norm, oracle_matrix_element, oracle_state_norm};
use qsc_core::{BlockGenerator, Error, SemigroupFamily};

use crate::{Cli, Command, Global};

pub const EXIT_IO: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_IO,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(what: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", what.display()),
    }
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("writing report: {e}"),
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| io_failure(path, e))
}

/// Parses a file, prefixing parse and validation messages with its path.
fn load<T>(path: &Path, parse: impl Fn(&[u8]) -> qsc_core::Result<T>) -> Result<T, Failure> {
    let bytes = read(path)?;
    parse(&bytes).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_generator(path: &Path) -> Result<BlockGenerator, Failure> {
    load(path, qio::parse_generator)
}

fn load_step(path: Option<&Path>, dim_k: usize) -> Result<StepFunction, Failure> {
    let step = match path {
        Some(p) => load(p, qio::parse_step_function)?,
        None => StepFunction::zero(dim_k),
    };
    if step.dim_k() != dim_k {
        return Err(Failure::validation(format!(
            "step function has dimension {}, generator has dim_k = {dim_k}",
            step.dim_k()
        )));
    }
    Ok(step)
}

fn load_vector(name: &str, text: Option<&str>, dim_h: usize) -> Result<Vec<C64>, Failure> {
    let v = match text {
        Some(t) => qio::parse_vector(t.as_bytes()).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("--{name}: {}", f.message);
            f
        })?,
        None => {
            let mut v = vec![C64::new(0.0, 0.0); dim_h];
            v[0] = C64::new(1.0, 0.0);
            v
        }
    };
    if v.len() != dim_h {
        return Err(Failure::validation(format!(
            "--{name} has length {}, generator has dim_h = {dim_h}",
            v.len()
        )));
    }
    Ok(v)
}

fn output(global: &Global) -> Result<Box<dyn Write>, Failure> {
    match &global.out {
        Some(p) => fs::File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| io_failure(p, e)),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn write_text(global: &Global, text: &str) -> Result<(), Failure> {
    let mut out = output(global)?;
    writeln!(out, "{text}")
        .and_then(|_| out.flush())
        .map_err(|e| io_failure(global.out.as_deref().unwrap_or(Path::new("stdout")), e))
}

fn csv_writer(global: &Global) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    Ok(csv::Writer::from_writer(output(global)?))
}

fn finish(mut w: csv::Writer<Box<dyn Write>>) -> Result<(), Failure> {
    w.flush().map_err(|e| csv_failure(e.into()))
}

fn check_positive(name: &str, x: f64) -> Result<(), Failure> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(Failure::validation(format!(
            "--{name} must be positive, got {x}"
        )));
    }
    Ok(())
}

fn verdict(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    if g.tol.is_nan() || g.tol < 0.0 || !g.tol.is_finite() {
        return Err(Failure::validation(format!(
            "--tol must be nonnegative, got {}",
            g.tol
        )));
    }
    match &cli.command {
        Command::Build { spec } => build(g, spec),
        Command::Check { generator, samples } => check(g, generator, *samples),
        Command::Evolve {
            generator,
            f,
            g: gpath,
            u,
            v,
            t,
            grid,
            oracle,
        } => evolve(
            g,
            generator,
            f.as_deref(),
            gpath.as_deref(),
            u.as_deref(),
            v.as_deref(),
            *t,
            *grid,
            *oracle,
        ),
        Command::Schur {
            generator,
            samples,
            n_max,
        } => schur(g, generator, *samples, *n_max),
        Command::Tk {
            generator,
            n_list,
            horizon,
            grid,
        } => tk(g, generator, n_list, *horizon, *grid),
        Command::Coords { generator } => coords(g, generator),
        Command::Dual { generator } => dual(g, generator),
        Command::OracleNorm {
            generator,
            g: gpath,
            v,
            t,
            n,
        } => oracle_norm(g, generator, gpath.as_deref(), v.as_deref(), *t, *n),
    }
}

fn build(g: &Global, spec: &Path) -> Outcome {
    let spec: ModelSpec = load(spec, qio::parse_model_spec)?;
    let model = spec.build()?;
    let f = &model.generator;
    write_text(g, &qio::generator_to_json(f))?;
    eprintln!(
        "dim_h = {}, dim_k = {}: {}",
        f.dim_h(),
        f.dim_k(),
        f.classify(g.tol).summary()
    );
    Ok(ExitCode::SUCCESS)
}

fn check(g: &Global, path: &Path, samples: usize) -> Outcome {
    let f = load_generator(path)?;
    let class = f.classify(g.tol);
    let dual_defect = f.adjoint().contractivity_defect();
    let sampled = sample_form_defect(&f, samples, g.seed)?;
    let mut w = csv_writer(g)?;
    let rows: [(&str, String); 8] = [
        ("contractivity_defect", class.defect.to_string()),
        ("dual_contractivity_defect", dual_defect.to_string()),
        ("sampled_form_defect", sampled.to_string()),
        ("c_norm", class.c_norm.to_string()),
        ("quadratic_defect", class.quadratic_defect.to_string()),
        (
            "adjoint_relation_defect",
            class.adjoint_relation_defect.to_string(),
        ),
        ("contractive", class.contractive.to_string()),
        ("equality_case", class.equality_case.to_string()),
    ];
    w.write_record(["quantity", "value"]).map_err(csv_failure)?;
    for (k, v) in rows {
        w.write_record([k, v.as_str()]).map_err(csv_failure)?;
    }
    finish(w)?;
    eprintln!("{}", class.summary());
    Ok(verdict(class.contractive))
}

#[allow(clippy::too_many_arguments)]
fn evolve(
    g: &Global,
    path: &Path,
    fpath: Option<&Path>,
    gpath: Option<&Path>,
    u: Option<&str>,
    v: Option<&str>,
    t: f64,
    grid: usize,
    oracle: Option<usize>,
) -> Outcome {
    let f = load_generator(path)?;
    let fs = load_step(fpath, f.dim_k())?;
    let gs = load_step(gpath, f.dim_k())?;
    let u = load_vector("u", u, f.dim_h())?;
    let v = load_vector("v", v, f.dim_h())?;
    check_positive("t", t)?;
    if grid == 0 {
        return Err(Failure::validation("--grid must be at least 1"));
    }
    if oracle == Some(0) {
        return Err(Failure::validation("--oracle needs at least 1 slot"));
    }
    let family = SemigroupFamily::new(f.clone());
    let mut w = csv_writer(g)?;
    let mut header = vec!["t", "re", "im"];
    if oracle.is_some() {
        header.extend(["oracle_re", "oracle_im", "abs_diff"]);
    }
    w.write_record(&header).map_err(csv_failure)?;
    let mut worst = 0.0f64;
    for j in 0..=grid {
        let s = t * j as f64 / grid as f64;
        let z = full_matrix_element(&family, &u, &fs, &v, &gs, s)?;
        let mut row = vec![s.to_string(), z.re.to_string(), z.im.to_string()];
        if let Some(n) = oracle {
            let o = if s == 0.0 {
                inner(&u, &v) * exp_inner(&fs, &gs, 0.0, f64::INFINITY)?
            } else {
                oracle_matrix_element(&f, &u, &fs, &v, &gs, s, n)?
            };
            let diff = (o - z).norm();
            worst = worst.max(diff);
            row.extend([o.re.to_string(), o.im.to_string(), diff.to_string()]);
        }
        w.write_record(&row).map_err(csv_failure)?;
    }
    finish(w)?;
    if oracle.is_some() {
        eprintln!("largest engine/oracle difference {worst:.3e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn schur(g: &Global, path: &Path, samples: usize, n_max: usize) -> Outcome {
    let f = load_generator(path)?;
    let reports = screen_family(&f, n_max, samples, g.seed, g.tol)?;
    let mut w = csv_writer(g)?;
    w.write_record(["probe_id", "n", "t", "defect", "pass", "skipped"])
        .map_err(csv_failure)?;
    for r in &reports {
        w.write_record([
            r.probe_id.to_string(),
            r.n.to_string(),
            r.t.to_string(),
            r.defect.to_string(),
            r.pass.to_string(),
            r.skipped.to_string(),
        ])
        .map_err(csv_failure)?;
    }
    finish(w)?;
    let failing: Vec<_> = reports.iter().filter(|r| !r.skipped && !r.pass).collect();
    let skipped = reports.iter().filter(|r| r.skipped).count();
    eprintln!(
        "{} probes, {} violations, {skipped} skipped",
        reports.len(),
        failing.len()
    );
    if let Some(worst) = failing.first() {
        let cs: Vec<String> = worst
            .c_tuple
            .iter()
            .map(|c| qio::vector_to_json(c))
            .collect();
        eprintln!(
            "worst probe {}: n = {}, t = {}, defect = {:.6e}, c = [{}]",
            worst.probe_id,
            worst.n,
            worst.t,
            worst.defect,
            cs.join(", ")
        );
    }
    Ok(verdict(failing.is_empty()))
}

fn tk(g: &Global, path: &Path, n_list: &[u32], horizon: f64, grid: usize) -> Outcome {
    let f = load_generator(path)?;
    check_positive("T", horizon)?;
    let zero = vec![C64::new(0.0, 0.0); f.dim_k()];
    let mut pairs = vec![(zero.clone(), zero)];
    for i in 0..f.dim_k() {
        let mut e = vec![C64::new(0.0, 0.0); f.dim_k()];
        e[i] = C64::new(1.0, 0.0);
        pairs.push((e.clone(), e));
    }
    let report = trotter_kato_pipeline(&f, n_list, &pairs, horizon, grid, g.tol)?;
    let mut w = csv_writer(g)?;
    w.write_record(["n", "pair", "sup_error"])
        .map_err(csv_failure)?;
    for row in &report.rows {
        w.write_record([
            row.n.to_string(),
            row.pair.to_string(),
            row.sup_error.to_string(),
        ])
        .map_err(csv_failure)?;
    }
    finish(w)?;
    let errs: Vec<String> = report
        .max_errors
        .iter()
        .map(|(n, e)| format!("n = {n}: {e:.3e}"))
        .collect();
    eprintln!(
        "{}; {}",
        errs.join(", "),
        if report.monotone {
            "monotone"
        } else {
            "NOT monotone"
        }
    );
    Ok(verdict(report.monotone))
}

fn coords(g: &Global, path: &Path) -> Outcome {
    let f = load_generator(path)?;
    let grid = coords_from_f(&f)?;
    let mut w = csv_writer(g)?;
    w.write_record(["alpha", "beta", "row", "col", "re", "im"])
        .map_err(csv_failure)?;
    for a in 0..=f.dim_k() {
        for b in 0..=f.dim_k() {
            let m = grid.get(a, b);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let z = m.get(i, j);
                    w.write_record([
                        a.to_string(),
                        b.to_string(),
                        i.to_string(),
                        j.to_string(),
                        z.re.to_string(),
                        z.im.to_string(),
                    ])
                    .map_err(csv_failure)?;
                }
            }
        }
    }
    finish(w)?;
    Ok(ExitCode::SUCCESS)
}

fn dual(g: &Global, path: &Path) -> Outcome {
    let f = load_generator(path)?;
    let family = dual_family(&f);
    write_text(g, &qio::generator_to_json(family.source()))?;
    eprintln!("dual: {}", family.source().classify(g.tol).summary());
    Ok(ExitCode::SUCCESS)
}

fn oracle_norm(
    g: &Global,
    path: &Path,
    gpath: Option<&Path>,
    v: Option<&str>,
    t: f64,
    n: usize,
) -> Outcome {
    let f = load_generator(path)?;
    let gs = load_step(gpath, f.dim_k())?;
    let v = load_vector("v", v, f.dim_h())?;
    check_positive("t", t)?;
    if n == 0 {
        return Err(Failure::validation("--n must be at least 1"));
    }
    let norm = oracle_state_norm(&f, &v, &gs, t, n, g.budget)?;
    let discrete = vec_norm(&v) * discrete_exp_norm(&gs, t, n)?;
    let target = vec_norm(&v) * gs.exp_norm(0.0, f64::INFINITY);
    let mut w = csv_writer(g)?;
    w.write_record([
        "n",
        "norm",
        "discrete_input_norm",
        "isometry_target",
        "defect",
    ])
    .map_err(csv_failure)?;
    w.write_record([
        n.to_string(),
        norm.to_string(),
        discrete.to_string(),
        target.to_string(),
        (norm - target).to_string(),
    ])
    .map_err(csv_failure)?;
    finish(w)?;
    Ok(ExitCode::SUCCESS)
}
