use fracspace::direct::{kernel_translation_l1, riesz_gradient_quadrature, QuadratureSpec};
use fracspace::interp::{default_t_grid, k_curve, KMethod};
use fracspace::io::{read_field, write_field};
use fracspace::norms::{dsp_norm, gagliardo_seminorm, holder_seminorm, NormKind, NormMethod, NormReport};
use fracspace::spectral::{bessel_potential, riesz_gradient_spectral};
use fracspace::verify::{check_ftc_roundtrip, default_region, exponents, run_suite, CheckReport, FtcPath};
use fracspace::{lp_norm, sample_corpus, translate, Field, Grid64, Region};

use crate::config::{Format, RunConfig};
use crate::output::{ensure_dir, num, write_csv, write_json, write_reports};
use crate::{CliError, GradientMethod, Input, NormChoice};

fn grid(cfg: &RunConfig) -> Result<Grid64, CliError> {
    Ok(cfg.grid.build()?)
}

fn load_input(cfg: &RunConfig, input: &Input) -> Result<(String, Field<f64>), CliError> {
    if let Some(path) = &input.input {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
        let u = read_field(path).map_err(|e| match e {
            fracspace::Error::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
            other => CliError::Config(format!("{}: {other}", path.display())),
        })?;
        return Ok((stem, u));
    }
    let g = grid(cfg)?;
    sample_corpus(&g, cfg.seed)
        .into_iter()
        .find(|e| e.label == input.label)
        .map(|e| (e.label, e.field))
        .ok_or_else(|| CliError::Config(format!("unknown corpus label `{}`", input.label)))
}

fn l2(u: &Field<f64>) -> Result<f64, CliError> {
    Ok(lp_norm(u, 2.0, &Region::FullTorus)?)
}

pub fn gradient(cfg: &RunConfig, input: &Input, s: f64, method: GradientMethod) -> Result<(), CliError> {
    let (name, u) = load_input(cfg, input)?;
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let mut rows = Vec::new();
    let mut fields = Vec::new();
    if method != GradientMethod::Quadrature {
        fields.push(("spectral", riesz_gradient_spectral(&u, s)?));
    }
    if method != GradientMethod::Spectral {
        let q = QuadratureSpec::periodic(u.grid().extent());
        fields.push(("quadrature", riesz_gradient_quadrature(&u, s, &q)?));
    }
    for (path, g) in &fields {
        write_field(g, dir, &format!("{name}_gradient_{path}"))?;
        rows.push(vec![name.clone(), path.to_string(), num(s), num(l2(g)?), num(g.max_abs())]);
    }
    if let [(_, a), (_, b)] = fields.as_slice() {
        let d = l2(&a.sub(b)?)? / l2(a)?;
        rows.push(vec![name.clone(), "relative_l2_discrepancy".into(), num(s), num(d), String::new()]);
    }
    if cfg.wants(Format::Csv) {
        write_csv(
            &dir.join(format!("{name}_gradient.csv")),
            "columns: label, path, s, l2 norm of the gradient (or relative discrepancy between paths), max magnitude",
            &["label", "path", "s", "l2", "max_abs"],
            &rows,
        )?;
    }
    Ok(())
}

pub fn bessel(cfg: &RunConfig, input: &Input, s: f64) -> Result<(), CliError> {
    let (name, u) = load_input(cfg, input)?;
    let v = bessel_potential(&u, s)?;
    let dir = &cfg.output_dir;
    write_field(&v, dir, &format!("{name}_bessel"))?;
    if cfg.wants(Format::Csv) {
        write_csv(
            &dir.join(format!("{name}_bessel.csv")),
            "columns: label, s, l2 norm of the input, l2 norm of the potential",
            &["label", "s", "l2_input", "l2_output"],
            &[vec![name.clone(), num(s), num(l2(&u)?), num(l2(&v)?)]],
        )?;
    }
    Ok(())
}

pub fn norm(cfg: &RunConfig, input: &Input, kind: NormChoice, s: f64, p: f64, mu: f64) -> Result<(), CliError> {
    let (name, u) = load_input(cfg, input)?;
    let full = Region::FullTorus;
    let report = match kind {
        NormChoice::Gagliardo => gagliardo_seminorm(&u, s, p, NormMethod::default_for(u.grid(), cfg.seed))?,
        NormChoice::Holder => {
            let region = default_region(u.grid());
            NormReport {
                kind: NormKind::Holder { mu },
                value: holder_seminorm(&u, mu, &region)?,
                std_error: None,
                region,
                method: NormMethod::GridPairs,
            }
        }
        NormChoice::Dsp => NormReport {
            kind: NormKind::Dsp { s, p },
            value: dsp_norm(&u, s, p)?,
            std_error: None,
            region: full,
            method: NormMethod::GridPairs,
        },
        NormChoice::Lp => NormReport {
            kind: NormKind::Lp { p },
            value: lp_norm(&u, p, &full)?,
            std_error: None,
            region: full,
            method: NormMethod::GridPairs,
        },
    };
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    if cfg.wants(Format::Json) {
        write_json(&dir.join(format!("{name}_norm.json")), &report)?;
    }
    if cfg.wants(Format::Csv) {
        let kind = serde_json::to_string(&report.kind).unwrap_or_default();
        write_csv(
            &dir.join(format!("{name}_norm.csv")),
            "columns: label, norm kind (JSON), value, Monte Carlo standard error (empty if exact)",
            &["label", "kind", "value", "std_error"],
            &[vec![name.clone(), kind, num(report.value), report.std_error.map(num).unwrap_or_default()]],
        )?;
    }
    Ok(())
}

fn finish(cfg: &RunConfig, reports: &[CheckReport]) -> Result<(), CliError> {
    write_reports(&cfg.output_dir, reports, cfg.wants(Format::Json), cfg.wants(Format::Csv))?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    for r in reports {
        println!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.check_id);
    }
    if failed > 0 {
        Err(CliError::Failed(failed))
    } else {
        Ok(())
    }
}

pub fn ftc_check(cfg: &RunConfig, s: Option<Vec<f64>>) -> Result<(), CliError> {
    let s_list = s.unwrap_or_else(|| cfg.s_list());
    let g = grid(cfg)?;
    let corpus = sample_corpus(&g, cfg.seed);
    let mut reports = Vec::new();
    for &s in &s_list {
        if !(s > 0.0 && s < 1.0) {
            return Err(CliError::Config(format!("s = {s} outside (0, 1)")));
        }
        for path in [FtcPath::Spectral, FtcPath::Quadrature] {
            for e in &corpus {
                let mut r = check_ftc_roundtrip(&e.field, s, path);
                r.params.insert("label".into(), e.label.clone().into());
                reports.push(r);
            }
        }
    }
    finish(cfg, &reports)
}

pub fn translation_sweep(cfg: &RunConfig, p: Option<Vec<f64>>, h: Option<Vec<f64>>) -> Result<(), CliError> {
    let g = grid(cfg)?;
    let p_list = p.unwrap_or_else(|| cfg.p_list(&[1.0, 2.0, 3.0]));
    let h_list = h.unwrap_or_else(|| cfg.h_list());
    let mut rows = Vec::new();
    for e in sample_corpus(&g, cfg.seed) {
        for &p in &p_list {
            for &h in &h_list {
                let mut shift = vec![0.0; g.dim()];
                shift[0] = h;
                let t = lp_norm(&translate(&e.field, &shift)?.sub(&e.field)?, p, &Region::FullTorus)?;
                rows.push(vec![e.label.clone(), num(p), num(h), num(t)]);
            }
        }
    }
    sweep_out(cfg, "translation_sweep.csv", "columns: label, p, shift h along e1, ||u(.+h) - u||_p", &["label", "p", "h", "modulus"], &rows)
}

pub fn embedding_sweep(
    cfg: &RunConfig,
    s: Option<Vec<f64>>,
    p: Option<Vec<f64>>,
    q: Option<Vec<f64>>,
) -> Result<(), CliError> {
    let g = grid(cfg)?;
    let n = g.dim();
    let s_list = s.unwrap_or_else(|| cfg.s_list());
    let p_list = p.unwrap_or_else(|| cfg.p_list(&[2.0]));
    let q_list = q.or_else(|| cfg.params.q.clone()).unwrap_or_else(|| vec![2.0, 3.0]);
    let region = default_region(&g);
    let corpus = sample_corpus(&g, cfg.seed);
    let mut rows = Vec::new();
    for &s in &s_list {
        for &p in &p_list {
            let e = exponents(n, s, p)?;
            for &q in &q_list {
                if let Some(ps) = e.p_star_s {
                    if q >= ps {
                        return Err(CliError::Config(format!("q = {q} is not below p*_s = {ps} (s = {s}, p = {p})")));
                    }
                }
                for c in corpus.iter().filter(|c| c.family.admissible(n, s, p)) {
                    let ratio = lp_norm(&c.field, q, &region)? / dsp_norm(&c.field, s, p)?;
                    rows.push(vec![c.label.clone(), num(s), num(p), num(q), num(ratio)]);
                }
            }
        }
    }
    sweep_out(
        cfg,
        "embedding_sweep.csv",
        "columns: label, s, p, q, ||u||_{L^q(ball(extent/8))} / (||u||_p + ||D^s u||_p)",
        &["label", "s", "p", "q", "ratio"],
        &rows,
    )
}

pub fn kernel_l1(cfg: &RunConfig, s: Option<Vec<f64>>) -> Result<(), CliError> {
    let n = cfg.grid.dim;
    let s_list = s.or_else(|| cfg.params.s.clone()).unwrap_or_else(|| (1..=9).map(|k| k as f64 / 10.0).collect());
    let q = QuadratureSpec::kernel_l1();
    let mut rows = Vec::new();
    for &s in &s_list {
        let v = kernel_translation_l1(n, s, &q)?;
        rows.push(vec![n.to_string(), num(s), num(v), num(v * s * (1.0 - s))]);
    }
    sweep_out(
        cfg,
        "kernel_l1.csv",
        "columns: dimension n, s, L1 norm of K(x) - K(x - e1) with K(x) = x/|x|^{n+1-s}, the same times s(1-s)",
        &["n", "s", "value", "value_s_1ms"],
        &rows,
    )
}

pub fn kfunctional(cfg: &RunConfig, input: &Input, p: f64) -> Result<(), CliError> {
    let (name, u) = load_input(cfg, input)?;
    let method = if p == 2.0 { KMethod::ExactHilbertP2 } else { KMethod::MollifierFamily };
    let curve = k_curve(&u, &default_t_grid(), p, method)?;
    let rows: Vec<Vec<String>> = curve.t_grid.iter().zip(&curve.values).map(|(t, k)| vec![num(*t), num(*k)]).collect();
    let comment = format!("columns: t, K(t) for `{name}` with p = {p}, method {method:?}");
    sweep_out(cfg, &format!("{name}_kfunctional.csv"), &comment, &["t", "K"], &rows)
}

fn sweep_out(cfg: &RunConfig, file: &str, comment: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    ensure_dir(&cfg.output_dir)?;
    write_csv(&cfg.output_dir.join(file), comment, header, rows)
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let suite = cfg.suite()?;
    suite.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let reports = run_suite(&suite).map_err(|e| CliError::Config(e.to_string()))?;
    finish(cfg, &reports)
}
