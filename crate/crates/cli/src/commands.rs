use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gbcodes::distance::{min_distance_with, DistanceOptions};
use gbcodes::extension::{check_dim_lower_bound, dim_exact_coprime, SparsityClass};
use gbcodes::report::{build_report, merge_csvs};
use gbcodes::scalable::{build_thm3_family, build_thm4_family, verify_embedding};
use gbcodes::search::{catalog, search_base_codes, LerScreen, SearchFilter};
use gbcodes::sim::{p_grid, sweep, to_csv, SweepManifest};
use gbcodes::{
    build_gb_str, weight_profile, BitVec, CssCode, CssDecoder, DecoderConfig, Error, LerPoint, SimOptions,
};
use serde_json::{json, Value};

use crate::input::{base_code, build_family, load_code, parse_members, read_text, Family};
use crate::{
    BaseArgs, BuildArgs, Cli, Command, DecodeArgs, DecoderArgs, DistanceArgs, FamilyArgs, Format, ReportArgs,
    ScaleArgs, SearchArgs, SweepArgs,
};

/// The command ran but its filter left nothing.
#[derive(Debug)]
pub struct EmptyResult(pub String);

impl fmt::Display for EmptyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "empty result: {}", self.0)
    }
}

impl std::error::Error for EmptyResult {}

/// 2 for an empty result, 3 for an exhausted budget, 4 for artifact I/O.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<EmptyResult>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            match e {
                Error::BudgetExceeded { .. } | Error::EnumerationBudget { .. } => return 3,
                Error::Artifact(_) => return 4,
                _ => {}
            }
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    1
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        gbcodes::par::configure_threads(t)?;
    }
    let out = Output { path: cli.out.clone() };
    match &cli.command {
        Command::Search(args) => search(args, cli, &out),
        Command::Build(args) => build(args, cli.format.unwrap_or(Format::Json), &out),
        Command::Extend(args) => extend(args, cli.format.unwrap_or(Format::Json), &out),
        Command::Scale3(args) => scale(args, None, cli.format.unwrap_or(Format::Json), &out),
        Command::Scale4(args) => scale(&args.scale, Some((args.j, args.r)), cli.format.unwrap_or(Format::Json), &out),
        Command::Distance(args) => distance(args, cli.format.unwrap_or(Format::Text), &out),
        Command::Decode(args) => decode(args, cli.format.unwrap_or(Format::Text), &out),
        Command::Sweep(args) => run_sweep(args, cli, &out),
        Command::Report(args) => report(args, cli.format.unwrap_or(Format::Text), &out),
        Command::Catalog => list_catalog(cli.format.unwrap_or(Format::Text), &out),
    }
}

struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// `<out stem>.<suffix>` next to the primary output, if there is one.
    fn sibling(&self, suffix: &str) -> Option<PathBuf> {
        let p = self.path.as_ref()?;
        let stem = p.file_stem()?.to_string_lossy();
        Some(p.with_file_name(format!("{stem}.{suffix}")))
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn unsupported(format: Format, command: &str) -> anyhow::Error {
    anyhow::anyhow!("{command} has no {format:?} output")
}

fn search(args: &SearchArgs, cli: &Cli, out: &Output) -> Result<()> {
    let filter = SearchFilter {
        ell: args.ell,
        max_weight: args.max_weight,
        require_dim: !args.allow_zero_dim,
        require_distance: args.min_distance,
        ler_screen: match (args.ler_p, args.ler_max) {
            (Some(p), Some(max_ler)) => Some(LerScreen { p, max_ler, trials: args.ler_trials }),
            _ => None,
        },
        seed: cli.seed,
        exec: Default::default(),
    };
    let res = search_base_codes(&filter)?;
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&res)?,
        Format::Csv => {
            let mut s = String::from("pair_index,a,b,n,k,w_r,d,ler\n");
            for h in &res.hits {
                let d = h.d.map(|d| d.to_string()).unwrap_or_default();
                let ler = h.ler.map(|l| l.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{},{},{},{d},{ler}", h.pair_index, h.a, h.b, h.n, h.k, h.w_r);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "l = {}: {} pairs, {} with k > 0, {} within weight {}, {} passed distance, {} passed LER\n",
                args.ell,
                res.total_pairs,
                res.positive_dim,
                res.passed_weight,
                args.max_weight,
                res.passed_distance,
                res.passed_ler
            );
            for (rank, h) in res.hits.iter().enumerate() {
                let d = h.d.map_or("?".into(), |d| d.to_string());
                let ler = h.ler.map_or(String::new(), |l| format!("  ler {l:.5}"));
                let _ = writeln!(s, "{:>4}  a = {}  b = {}  [[{},{},{d}]]  w_r {}{ler}", rank + 1, h.a, h.b, h.n, h.k, h.w_r);
            }
            s
        }
    };
    out.emit(&text)?;
    if res.hits.is_empty() {
        return Err(EmptyResult(format!("no code at l = {} passed the filter", args.ell)).into());
    }
    Ok(())
}

fn code_value(code: &CssCode, matrices: bool) -> Value {
    serde_json::to_value(code.to_doc(matrices)).expect("code documents serialise")
}

fn code_line(code: &CssCode) -> String {
    let w = weight_profile(code);
    format!("{}  l {}  a = {}  b = {}  w_r {}  w_c {}", code.params(), code.ell(), code.a(), code.b(), w.w_r, w.w_c)
}

fn build(args: &BuildArgs, format: Format, out: &Output) -> Result<()> {
    let mut code = build_gb_str(&args.a, &args.b, args.ell)?;
    if args.distance {
        let d = min_distance_with(&code, &DistanceOptions::default())?;
        code.d = Some(d.d);
    }
    let text = match format {
        Format::Json => pretty(&code_value(&code, args.matrices))?,
        Format::Text => code_line(&code) + "\n",
        Format::Csv => return Err(unsupported(format, "build")),
    };
    out.emit(&text)
}

fn base_of(base: &BaseArgs) -> impl FnOnce() -> Result<CssCode> + '_ {
    || base_code(base.base.as_deref(), base.a.as_deref(), base.b.as_deref(), base.ell)
}

fn family_of(args: &FamilyArgs) -> Result<Family> {
    build_family(&args.plan, base_of(&args.base), &parse_members(&args.members)?)
}

fn family_text(fam: &Family) -> String {
    let mut s = String::new();
    for (m, code) in &fam.members {
        let _ = writeln!(s, "m = {m}: {}", code_line(code));
        if let Some(plan) = &fam.plan {
            match dim_exact_coprime(plan, *m) {
                Ok(k) => {
                    let _ = writeln!(s, "        closed-form k = {k}");
                }
                Err(e) => {
                    let _ = writeln!(s, "        closed form not applicable: {e}");
                }
            }
        }
    }
    let codes: Vec<CssCode> = fam.members.iter().map(|m| m.1.clone()).collect();
    let check = check_dim_lower_bound(&codes);
    let _ = writeln!(s, "k >= k_1 on every member: {} (k = {:?})", check.holds, check.dims);
    if let Some(profile) = fam.sparsity() {
        let class = match profile.class {
            SparsityClass::QLdpc { t } => format!("qLDPC with t = {t}"),
            SparsityClass::ExponentialDecay { ratio, alpha_fit } => {
                format!("exponentially decaying density, ratio {ratio} (fit {alpha_fit:.4})")
            }
            SparsityClass::Other => "no uniform sparsity pattern".into(),
        };
        let _ = writeln!(s, "sparsity: {class}");
    }
    s
}

fn extend(args: &FamilyArgs, format: Format, out: &Output) -> Result<()> {
    let fam = family_of(args)?;
    let text = match format {
        Format::Json => pretty(&fam.members.iter().map(|(_, c)| code_value(c, false)).collect::<Vec<_>>())?,
        Format::Text => family_text(&fam),
        Format::Csv => {
            let mut s = String::from("member,ell,n,k,w_r,w_c,a,b\n");
            for (m, c) in &fam.members {
                let w = weight_profile(c);
                let _ = writeln!(s, "{m},{},{},{},{},{},{},{}", c.ell(), c.n(), c.k(), w.w_r, w.w_c, c.a(), c.b());
            }
            s
        }
    };
    out.emit(&text)
}

fn scale(args: &ScaleArgs, insertion: Option<(usize, usize)>, format: Format, out: &Output) -> Result<()> {
    let base = load_code(&args.base)?;
    if args.levels == 0 {
        bail!("--levels must be at least 1");
    }
    let fam = match insertion {
        None => build_thm3_family(&base, args.levels)?,
        Some((j, r)) => build_thm4_family(&base, args.levels, j, r)?,
    };
    let certs: Vec<_> = fam.windows(2).map(|w| verify_embedding(&w[0], &w[1])).collect();
    if let Some(path) = args.certificates.clone().or_else(|| out.sibling("embedding.json")) {
        write_json(&path, &certs)?;
    }
    let text = match format {
        Format::Json => pretty(&fam.iter().map(|c| code_value(c, false)).collect::<Vec<_>>())?,
        Format::Text => {
            let mut s = String::new();
            for (i, c) in fam.iter().enumerate() {
                let _ = writeln!(s, "level {}: {}", i + 1, code_line(c));
            }
            for (i, c) in certs.iter().enumerate() {
                let status = if c.holds { "holds".to_string() } else { format!("not certified ({:?})", c.mismatch) };
                let _ = writeln!(s, "embedding {} -> {}: {status}", i + 1, i + 2);
            }
            s
        }
        Format::Csv => return Err(unsupported(format, "scale")),
    };
    out.emit(&text)
}

fn distance(args: &DistanceArgs, format: Format, out: &Output) -> Result<()> {
    let code = load_code(&args.code)?;
    let mut opts = DistanceOptions { cap: args.cap, ..DistanceOptions::default() };
    if let Some(b) = args.budget {
        opts.budget = b;
    }
    let res = min_distance_with(&code, &opts)?;
    let witness = res.witness.as_ref().map(|w| w.symplectic().to_string());
    let text = match format {
        Format::Json => pretty(&json!({
            "params": code.params(),
            "d": res.d,
            "exact": res.exact,
            "witness": witness,
            "witness_sector": res.witness.as_ref().map(|w| w.sector),
        }))?,
        Format::Text => {
            let bound = if res.exact { "=" } else { ">=" };
            let mut s = format!("d {bound} {}\n", res.d);
            if let Some(w) = &witness {
                let _ = writeln!(s, "witness {w}");
            }
            s
        }
        Format::Csv => return Err(unsupported(format, "distance")),
    };
    out.emit(&text)
}

fn decoder_config(args: &DecoderArgs) -> DecoderConfig {
    DecoderConfig {
        max_iter: args.max_iter,
        ms_scale: args.ms_scale,
        osd_order: args.osd_order,
        osd_mode: args.osd_mode,
        osd_always: args.osd_always,
    }
}

fn decode(args: &DecodeArgs, format: Format, out: &Output) -> Result<()> {
    let code = load_code(&args.code)?;
    let text = read_text(&args.syndrome)?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let (Some(sx), Some(sz)) = (lines.next(), lines.next()) else {
        return Err(Error::Artifact("syndrome file needs two lines".into()).into());
    };
    let parse = |s: &str, rows: usize| -> Result<BitVec> {
        let v: BitVec = s.parse().map_err(|e| Error::Artifact(format!("syndrome {s:?}: {e}")))?;
        if v.len() != rows {
            return Err(Error::Artifact(format!("syndrome has {} bits, expected {rows}", v.len())).into());
        }
        Ok(v)
    };
    let sx = parse(sx, code.hx().rows())?;
    let sz = parse(sz, code.hz().rows())?;
    let cfg = decoder_config(&args.decoder);
    let mut dec = CssDecoder::new(&code, cfg)?;
    let marginal = 2.0 * args.p / 3.0;
    let x = dec.decode_sector(true, &sz, marginal)?;
    let z = dec.decode_sector(false, &sx, marginal)?;
    let text = match format {
        Format::Json => pretty(&json!({
            "ex": x.estimate.to_string(),
            "ez": z.estimate.to_string(),
            "x_bp_converged": x.bp_converged,
            "z_bp_converged": z.bp_converged,
            "x_osd_used": x.osd_used,
            "z_osd_used": z.osd_used,
        }))?,
        Format::Text => format!(
            "ex {}\nez {}\nbp converged: x {} z {}; osd used: x {} z {}\n",
            x.estimate, z.estimate, x.bp_converged, z.bp_converged, x.osd_used, z.osd_used
        ),
        Format::Csv => return Err(unsupported(format, "decode")),
    };
    out.emit(&text)
}

fn parse_split(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad split {s:?}"))?;
    match parts[..] {
        [x, y, z] => Ok([x, y, z]),
        _ => bail!("split needs three values px,py,pz, got {s:?}"),
    }
}

fn point_value(p: &LerPoint) -> Value {
    json!({
        "code_label": p.code_label, "n": p.n, "k": p.k, "p": p.p, "trials": p.trials,
        "failures": p.failures, "ler": p.ler, "ci_low": p.ci_low, "ci_high": p.ci_high, "seed": p.seed,
    })
}

fn run_sweep(args: &SweepArgs, cli: &Cli, out: &Output) -> Result<()> {
    let fam = family_of(&args.family)?;
    let grid = p_grid(args.p_min, args.p_max, args.p_step)?;
    let split = args.split.as_deref().map(parse_split).transpose()?;
    let mut cfg = decoder_config(&args.decoder);
    cfg.osd_order = Some(cfg.osd_order.unwrap_or(fam.base_ell));
    let opts = SimOptions {
        trials: args.trials,
        precision: args.precision,
        stop: args.stop,
        seed: cli.seed,
        exec: Default::default(),
    };
    let labels = fam.labels();
    let mut points = Vec::new();
    for (label, (_, code)) in labels.iter().zip(&fam.members) {
        let one = [(label.clone(), code.clone())];
        for r in sweep(&one, &grid, split, &cfg, &opts)? {
            let p = &r.point;
            eprintln!("{} p = {:.4}: ler {:.5} ({} / {} trials)", p.code_label, p.p, p.ler, p.failures, p.trials);
            points.push(r.point);
        }
    }
    if let Some(path) = out.sibling("manifest.json") {
        let manifest = SweepManifest {
            labels,
            grid,
            split: split.unwrap_or([1.0 / 3.0; 3]),
            options: opts,
            decoder: cfg,
        };
        write_json(&path, &manifest)?;
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&points),
        Format::Json => pretty(&points.iter().map(point_value).collect::<Vec<_>>())?,
        Format::Text => {
            let mut s = String::new();
            for p in &points {
                let _ = writeln!(s, "{:<10} p {:.4}  ler {:.5}  [{:.5}, {:.5}]  {} trials", p.code_label, p.p, p.ler, p.ci_low, p.ci_high, p.trials);
            }
            s
        }
    };
    out.emit(&text)
}

fn report(args: &ReportArgs, format: Format, out: &Output) -> Result<()> {
    let texts = args.inputs.iter().map(|p| read_text(p)).collect::<Result<Vec<_>>>()?;
    let report = build_report(merge_csvs(&texts)?)?;
    let text = match format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&report)?,
    };
    out.emit(&text)
}

fn list_catalog(format: Format, out: &Output) -> Result<()> {
    let rows: Vec<(gbcodes::search::CatalogEntry, CssCode)> =
        catalog().into_iter().map(|e| e.build().map(|c| (e, c))).collect::<gbcodes::Result<_>>()?;
    let text = match format {
        Format::Json => pretty(
            &rows
                .iter()
                .map(|(e, c)| json!({"id": e.id, "ell": e.ell, "a": e.a, "b": e.b, "n": c.n(), "k": c.k(), "d": e.printed_distance}))
                .collect::<Vec<_>>(),
        )?,
        Format::Csv => {
            let mut s = String::from("id,ell,a,b,n,k,d\n");
            for (e, c) in &rows {
                let d = e.printed_distance.map(|d| d.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{},{},{},{d}", e.id, e.ell, e.a, e.b, c.n(), c.k());
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (e, c) in &rows {
                let params = match e.printed_distance {
                    Some(d) => format!("[[{},{},{d}]]", c.n(), c.k()),
                    None => format!("[[{},{}]]", c.n(), c.k()),
                };
                let _ = writeln!(s, "({})  l = {:<2}  a = {:<14} b = {:<16} {params}", e.id, e.ell, e.a, e.b);
            }
            s
        }
    };
    out.emit(&text)
}
