//! `msmt`: reproducible experiment driver for multilinear Schur/Fourier
//! multiplier lower bounds. Subcommands mirror the library's experiment
//! drivers; every run is seeded and reproducible, JSON reports embed the
//! resolved configuration, and numerical-assertion failures exit with
//! code 3 (input/config problems with code 2).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use msmt_core::builtin::parse_symbol_descriptor;
use msmt_core::error::Error;
use msmt_core::experiments::{bht_lower, cz_lower, parse_lattice_spec, szego_scan, trunc_growth};
use msmt_core::exponent::Exponent;
use msmt_core::groups::{parse_group_spec, GroupFunction};
use msmt_core::io::{read_matrix, read_symbol, write_matrix};
use msmt_core::normest::{restart_rng, EstimatorConfig};
use msmt_core::symbols::{fourier_apply, schur_apply, SymbolTensor};
use msmt_core::transference::transfer_inequality_check;
use msmt_core::Result;

#[derive(Parser)]
#[command(name = "msmt", version, about = "Multilinear Schur multiplier toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace-norm growth of triangular truncation: ratio(N) = ‖M_{H0}(J_N)‖_1 / N
    TruncGrowth(TruncArgs),
    /// Lower-bound chain for the bilinear Hilbert transform on a window [-N, N]
    BhtLower(BhtArgs),
    /// Lower-bound chain for the Calderón–Zygmund slice symbol (1+φ)/2
    CzLower(CzArgs),
    /// Szegő/Følner compression scan against torus norms
    Szego(SzegoArgs),
    /// Transference inequality with witness lifting on a finite group
    TransferCheck(TransferArgs),
    /// Apply a Schur or Fourier multiplier to matrices/functions from files
    Apply(ApplyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file mirroring the flags; explicit flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; all randomness derives from it
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (defaults to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Force JSON output
    #[arg(long)]
    json: bool,
    /// Force CSV output
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct TruncArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated matrix sizes
    #[arg(long)]
    sizes: Option<String>,
}

#[derive(Args)]
struct BhtArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Window radius N (the window is [-N, N])
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args)]
struct CzArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated lambda sequence starting at 0 (default 0,1,2,4,...)
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args)]
struct SzegoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Lattice function: "delta:1,-1" or "@file.json"
    #[arg(long)]
    f: Option<String>,
    /// Comma-separated exponents, e.g. "2,4,inf"
    #[arg(long)]
    p_list: Option<String>,
    /// Comma-separated window radii
    #[arg(long)]
    m_list: Option<String>,
}

#[derive(Args)]
struct TransferArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Group spec: cyclic:m, dihedral:m, product:cyclic:a,cyclic:b
    #[arg(long)]
    group: Option<String>,
    /// Symbol arity n (the Fourier symbol lives on G^n)
    #[arg(long)]
    n: Option<usize>,
    /// "random" or "@file.json" with a SymbolTensor
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    /// Output exponent (defaults to the Hölder combination of p1, p2)
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// "schur" or "fourier"
    #[arg(long)]
    mode: Option<String>,
    /// Symbol tensor JSON file, or a builtin descriptor like "bht-h" with --window
    #[arg(long)]
    symbol: Option<String>,
    /// Window radius for materializing builtin symbol descriptors
    #[arg(long)]
    window: Option<usize>,
    /// Comma-separated input files (matrices for schur, coefficient vectors for fourier)
    #[arg(long)]
    inputs: Option<String>,
    /// Group spec (fourier mode)
    #[arg(long)]
    group: Option<String>,
}

/// The on-disk config format; every field optional, flags win.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    subcommand: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    sizes: Option<String>,
    n: Option<usize>,
    p1: Option<String>,
    p2: Option<String>,
    p: Option<String>,
    restarts: Option<usize>,
    lambdas: Option<String>,
    f: Option<String>,
    p_list: Option<String>,
    m_list: Option<String>,
    group: Option<String>,
    symbol: Option<String>,
    window: Option<usize>,
    mode: Option<String>,
    inputs: Option<String>,
}

fn load_config(path: &Option<PathBuf>, subcommand: &str) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)?;
    let cfg: FileConfig = serde_json::from_str(&text).map_err(|e| Error::format(format!("config: {e}")))?;
    if let Some(sub) = &cfg.subcommand {
        if sub != subcommand {
            return Err(Error::input(format!(
                "config file is for subcommand '{sub}', invoked '{subcommand}'"
            )));
        }
    }
    Ok(cfg)
}

fn parse_exponent(s: &str) -> Result<Exponent> {
    s.parse()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| Error::input(format!("bad {what} entry '{part}'")))
        })
        .collect()
}

fn parse_exponent_list(s: &str) -> Result<Vec<Exponent>> {
    s.split(',').map(|part| parse_exponent(part.trim())).collect()
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

fn estimator_config(seed: u64, restarts: Option<usize>) -> EstimatorConfig {
    let mut cfg = EstimatorConfig::with_seed(seed);
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    cfg
}

fn run_trunc(args: TruncArgs) -> Result<()> {
    let file = load_config(&args.common.config, "trunc-growth")?;
    let seed = args.common.seed.or(file.seed).unwrap_or(42);
    let out = args.common.out.or(file.out);
    let sizes_spec = args
        .sizes
        .or(file.sizes)
        .unwrap_or_else(|| "8,16,32,64,128,256,512".to_string());
    let sizes: Vec<usize> = parse_list(&sizes_spec, "size")?;
    let report = trunc_growth(&sizes)?;

    #[derive(Serialize)]
    struct Resolved<'a> {
        subcommand: &'a str,
        sizes: &'a [usize],
        seed: u64,
    }
    if args.common.json {
        let doc = serde_json::json!({
            "config": Resolved { subcommand: "trunc-growth", sizes: &sizes, seed },
            "result": report,
        });
        write_or_print(&out, &serde_json::to_string_pretty(&doc).unwrap())?;
    } else {
        let mut csv = String::from("N,ratio,ln_N\n");
        for row in &report.rows {
            csv.push_str(&format!("{},{},{}\n", row.size, row.ratio, row.log_size));
        }
        write_or_print(&out, &csv)?;
        eprintln!(
            "fit: ratio ≈ {:.6} + {:.6}·ln N (max residual {:.2e})",
            report.intercept, report.slope, report.max_fit_residual
        );
    }
    Ok(())
}

fn run_bht(args: BhtArgs) -> Result<()> {
    let file = load_config(&args.common.config, "bht-lower")?;
    let seed = args.common.seed.or(file.seed).unwrap_or(42);
    let out = args.common.out.or(file.out);
    let n = args.n.or(file.n).ok_or_else(|| Error::input("bht-lower needs --n"))?;
    let p1 = parse_exponent(&args.p1.or(file.p1).unwrap_or_else(|| "2".into()))?;
    let p2 = parse_exponent(&args.p2.or(file.p2).unwrap_or_else(|| "2".into()))?;
    let cfg = estimator_config(seed, args.restarts.or(file.restarts));
    let report = bht_lower(n, p1, p2, &cfg)?;
    let doc = serde_json::json!({
        "config": {
            "subcommand": "bht-lower", "n": n, "p1": p1, "p2": p2,
            "seed": seed, "restarts": cfg.restarts,
        },
        "result": report,
    });
    write_or_print(&out, &serde_json::to_string_pretty(&doc).unwrap())
}

fn run_cz(args: CzArgs) -> Result<()> {
    let file = load_config(&args.common.config, "cz-lower")?;
    let seed = args.common.seed.or(file.seed).unwrap_or(42);
    let out = args.common.out.or(file.out);
    let n = args.n.or(file.n).ok_or_else(|| Error::input("cz-lower needs --n"))?;
    let lambdas = match args.lambdas.or(file.lambdas) {
        Some(spec) => Some(parse_list::<f64>(&spec, "lambda")?),
        None => None,
    };
    let cfg = estimator_config(seed, args.restarts.or(file.restarts));
    let report = cz_lower(n, lambdas, &cfg)?;
    let doc = serde_json::json!({
        "config": {
            "subcommand": "cz-lower", "n": n, "seed": seed, "restarts": cfg.restarts,
            "lambdas": report.lambdas,
        },
        "result": report,
    });
    write_or_print(&out, &serde_json::to_string_pretty(&doc).unwrap())
}

fn run_szego(args: SzegoArgs) -> Result<()> {
    let file = load_config(&args.common.config, "szego")?;
    let seed = args.common.seed.or(file.seed).unwrap_or(42);
    let out = args.common.out.or(file.out);
    let f_spec = args.f.or(file.f).unwrap_or_else(|| "delta:1,-1".to_string());
    let f = parse_lattice_spec(&f_spec)?;
    let p_list = parse_exponent_list(&args.p_list.or(file.p_list).unwrap_or_else(|| "2,4,inf".into()))?;
    let m_list: Vec<usize> = parse_list(
        &args.m_list.or(file.m_list).unwrap_or_else(|| "10,100,1000,2000".into()),
        "window",
    )?;
    let rows = szego_scan(&f, &p_list, &m_list)?;
    if args.common.json {
        let doc = serde_json::json!({
            "config": {"subcommand": "szego", "f": f_spec, "seed": seed,
                        "p_list": p_list, "m_list": m_list},
            "result": rows,
        });
        write_or_print(&out, &serde_json::to_string_pretty(&doc).unwrap())
    } else {
        let mut csv = String::from("p,M,compression,torus,gap\n");
        for r in &rows {
            csv.push_str(&format!("{},{},{},{},{}\n", r.p, r.window, r.compression, r.torus, r.gap));
        }
        write_or_print(&out, &csv)
    }
}

fn run_transfer(args: TransferArgs) -> Result<()> {
    let file = load_config(&args.common.config, "transfer-check")?;
    let seed = args.common.seed.or(file.seed).unwrap_or(42);
    let out = args.common.out.or(file.out);
    let group_spec = args.group.or(file.group).unwrap_or_else(|| "cyclic:4".to_string());
    let group = Arc::new(parse_group_spec(&group_spec)?);
    let arity = args.n.or(file.n).unwrap_or(2);
    let symbol_spec = args.symbol.or(file.symbol).unwrap_or_else(|| "random".to_string());
    let symbol = resolve_group_symbol(&symbol_spec, arity, group.order(), seed)?;

    let (p1, p2, p) = match arity {
        1 => {
            let p1 = parse_exponent(&args.p1.or(file.p1).unwrap_or_else(|| "2".into()))?;
            let p = match args.p.or(file.p) {
                Some(s) => parse_exponent(&s)?,
                None => p1,
            };
            (p1, None, p)
        }
        2 => {
            let p1 = parse_exponent(&args.p1.or(file.p1).unwrap_or_else(|| "2".into()))?;
            let p2 = parse_exponent(&args.p2.or(file.p2).unwrap_or_else(|| "2".into()))?;
            let p = match args.p.or(file.p) {
                Some(s) => parse_exponent(&s)?,
                None => {
                    let inv = p1.recip() + p2.recip();
                    if inv <= 0.0 {
                        Exponent::INFINITY
                    } else {
                        Exponent::new(1.0 / inv)?
                    }
                }
            };
            (p1, Some(p2), p)
        }
        other => {
            return Err(Error::input(format!(
                "transfer-check supports arity 1 or 2 from the CLI, got {other}"
            )))
        }
    };
    let input_ps: Vec<Exponent> = match p2 {
        Some(q) => vec![p1, q],
        None => vec![p1],
    };
    let cfg = estimator_config(seed, args.restarts.or(file.restarts));
    let report = transfer_inequality_check(&group, &symbol, &input_ps, p, &cfg)?;
    let doc = serde_json::json!({
        "config": {
            "subcommand": "transfer-check", "group": group_spec, "n": arity,
            "symbol": symbol_spec, "p1": p1, "p2": p2, "p": p,
            "seed": seed, "restarts": cfg.restarts,
        },
        "result": report,
    });
    write_or_print(&out, &serde_json::to_string_pretty(&doc).unwrap())
}

fn resolve_group_symbol(spec: &str, arity: usize, order: usize, seed: u64) -> Result<SymbolTensor> {
    if spec == "random" {
        let mut rng = restart_rng(seed, 0x53594d);
        let mut values = Vec::new();
        for _ in 0..order.pow(arity as u32) {
            let v = msmt_core::normest::complex_gaussian_vector(&mut rng, 1);
            values.push(v[0]);
        }
        return SymbolTensor::new(arity, order, values);
    }
    if let Some(path) = spec.strip_prefix('@') {
        let s = read_symbol(Path::new(path))?;
        if s.arity() != arity || s.axis() != order {
            return Err(Error::input(format!(
                "symbol file has arity {} axis {}, expected arity {arity} axis {order}",
                s.arity(),
                s.axis()
            )));
        }
        return Ok(s);
    }
    Err(Error::input(format!("unknown symbol spec '{spec}' (use 'random' or '@file')")))
}

fn run_apply(args: ApplyArgs) -> Result<()> {
    let file = load_config(&args.common.config, "apply")?;
    let out = args
        .common
        .out
        .or(file.out)
        .ok_or_else(|| Error::input("apply needs --out for the result matrix"))?;
    let mode = args.mode.or(file.mode).unwrap_or_else(|| "schur".to_string());
    let symbol_spec = args
        .symbol
        .or(file.symbol)
        .ok_or_else(|| Error::input("apply needs --symbol (file path or builtin descriptor)"))?;
    let inputs_spec = args
        .inputs
        .or(file.inputs)
        .ok_or_else(|| Error::input("apply needs --inputs"))?;
    let input_paths: Vec<&str> = inputs_spec.split(',').map(str::trim).collect();

    let symbol = if Path::new(&symbol_spec).exists() {
        read_symbol(Path::new(&symbol_spec))?
    } else {
        let f = parse_symbol_descriptor(&symbol_spec)?;
        let window = args
            .window
            .or(file.window)
            .ok_or_else(|| Error::input("builtin symbols need --window to materialize"))?;
        f.materialize_window(window)?
    };

    match mode.as_str() {
        "schur" => {
            let matrices: Vec<_> = input_paths
                .iter()
                .map(|p| read_matrix(Path::new(p)))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&_> = matrices.iter().collect();
            let result = schur_apply(&symbol, &refs)?;
            write_matrix(&out, &result)
        }
        "fourier" => {
            let group_spec = args
                .group
                .or(file.group)
                .ok_or_else(|| Error::input("fourier mode needs --group"))?;
            let group = Arc::new(parse_group_spec(&group_spec)?);
            let functions: Vec<GroupFunction> = input_paths
                .iter()
                .map(|p| {
                    let m = read_matrix(Path::new(p))?;
                    if m.rows() * m.cols() != group.order() {
                        return Err(Error::input(format!(
                            "coefficient file {p} has {} entries, group order is {}",
                            m.rows() * m.cols(),
                            group.order()
                        )));
                    }
                    GroupFunction::new(group.clone(), m.entries().to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&GroupFunction> = functions.iter().collect();
            let result = fourier_apply(&symbol, &refs, &group)?;
            write_matrix(&out, &result)
        }
        other => Err(Error::input(format!("unknown apply mode '{other}'"))),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::TruncGrowth(args) => run_trunc(args),
        Command::BhtLower(args) => run_bht(args),
        Command::CzLower(args) => run_cz(args),
        Command::Szego(args) => run_szego(args),
        Command::TransferCheck(args) => run_transfer(args),
        Command::Apply(args) => run_apply(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
