//! The `hsum` command-line front end.
//!
//! [`run`] takes the argument list and two writers and returns the exit
//! status: 0 on success, 1 on domain errors (singular matrix, empty family,
//! exhausted budget, …), 2 on malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attack::{reconstruct, verify_reconstruction, VerifyMode};
use crate::census;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::hiddensum::HiddenSum;
use crate::linearize::{fixed_coordinates, linearize, SolutionBasis};
use crate::tbcipher::{self, CircAffineOracle};

/// Seed used by randomized subcommands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "hsum", version, about = "Practical hidden sums over (F2)^N")]
struct Cli {
    /// Report style: aligned text, or one `key=value` record per line.
    #[arg(long, value_enum, global = true, default_value = "human")]
    output: OutputMode,

    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Human,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count practical hidden sums with given n and d, or on (F2)^N in total.
    Census(CensusArgs),
    /// Check the defining conditions of a `.hsum` file.
    Validate { file: PathBuf },
    /// Compute x ∘ y.
    Add { file: PathBuf, x: String, y: String },
    /// Coordinates of v in the canonical ∘-basis.
    Decompose { file: PathBuf, v: String },
    /// Solve for every hidden sum that linearizes π λ π⁻¹.
    Linearize(LinearizeArgs),
    /// Check whether a mixing layer leaves some wall invariant.
    Proper(ProperArgs),
    /// PRESENT mixing layer: write the matrices or reproduce the case study.
    Present(PresentArgs),
    /// Recover a random ∘-affine black box from N+1 queries.
    AttackDemo(AttackArgs),
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Enumerate even when a closed form exists.
    #[arg(long)]
    exact: bool,
    /// Sum over all d on (F2)^N.
    #[arg(long, value_name = "N")]
    total: Option<usize>,
    /// Also compare μ/ν with its exponential bound.
    #[arg(long)]
    ratio: bool,
    /// Candidate cap for enumerations (default: $HIDDENSUM_BUDGET or 2^28).
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct LinearizeArgs {
    #[arg(long)]
    lambda: PathBuf,
    #[arg(long)]
    pi: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Draw this many solutions.
    #[arg(long, value_name = "K")]
    sample: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    full_rank_only: bool,
    /// Write the kernel basis to this path.
    #[arg(long, value_name = "PATH")]
    emit_basis: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProperArgs {
    #[arg(long)]
    lambda: PathBuf,
    #[arg(long)]
    bricks: usize,
    #[arg(long)]
    brick_size: usize,
}

#[derive(Args, Debug)]
struct PresentArgs {
    #[arg(long, value_name = "PATH")]
    emit_lambda: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    emit_pi: Option<PathBuf>,
    /// Run the conjugation, system construction and solve end to end.
    #[arg(long)]
    repro: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct AttackArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Compare on all 2^N inputs instead of a sample.
    #[arg(long)]
    exhaustive: bool,
}

/// Line-oriented report writer for both output modes.
struct Report<'a> {
    out: &'a mut dyn Write,
    mode: OutputMode,
}

impl Report<'_> {
    /// A human line, skipped in record mode.
    fn human(&mut self, line: impl AsRef<str>) -> Result<()> {
        if self.mode == OutputMode::Human {
            writeln!(self.out, "{}", line.as_ref())?;
        }
        Ok(())
    }

    /// A record line, skipped in human mode.
    fn record(&mut self, fields: &[(&str, String)]) -> Result<()> {
        if self.mode == OutputMode::Records {
            let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(self.out, "{}", parts.join(" "))?;
        }
        Ok(())
    }

    fn seed(&mut self, seed: u64) -> Result<()> {
        self.human(format!("seed: {seed}"))?;
        self.record(&[("seed", seed.to_string())])
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, out)),
            Err(e) => Err(Error::InvalidParameter(format!("cannot build thread pool: {e}"))),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut rep = Report { out, mode: cli.output };
    match &cli.command {
        Command::Census(a) => cmd_census(a, &mut rep),
        Command::Validate { file } => cmd_validate(file, &mut rep),
        Command::Add { file, x, y } => {
            let hs = read_hsum(file)?;
            let s = hs.circ_add(&parse_vec(x)?, &parse_vec(y)?)?;
            rep.human(s.to_string())?;
            rep.record(&[("sum", s.to_string())])
        }
        Command::Decompose { file, v } => {
            let hs = read_hsum(file)?;
            let c = hs.decompose(&parse_vec(v)?)?;
            rep.human(c.to_string())?;
            rep.record(&[("coefficients", c.to_string())])
        }
        Command::Linearize(a) => cmd_linearize(a, &mut rep),
        Command::Proper(a) => cmd_proper(a, &mut rep),
        Command::Present(a) => cmd_present(a, &mut rep),
        Command::AttackDemo(a) => cmd_attack(a, &mut rep),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_hsum(path: &Path) -> Result<HiddenSum> {
    HiddenSum::parse_text(&read_text(path)?)
}

fn read_matrix(path: &Path) -> Result<BitMatrix> {
    BitMatrix::parse_text(&read_text(path)?)
}

fn parse_vec(s: &str) -> Result<BitVector> {
    s.parse()
}

fn cmd_census(a: &CensusArgs, rep: &mut Report) -> Result<()> {
    let budget = match a.budget {
        Some(b) => b,
        None => census::budget_from_env()?,
    };
    if let Some(big_n) = a.total {
        let t = census::total_count(big_n, budget)?;
        rep.human(format!(
            "{:>3} {:>3} {:>12} {:>12} {:>16}",
            "d", "n", "subspaces", "count", "product"
        ))?;
        for term in &t.terms {
            rep.human(format!(
                "{:>3} {:>3} {:>12} {:>12} {:>16}",
                term.d, term.n, term.subspaces, term.count, term.product
            ))?;
            rep.record(&[
                ("N", big_n.to_string()),
                ("d", term.d.to_string()),
                ("n", term.n.to_string()),
                ("subspaces", term.subspaces.to_string()),
                ("count", term.count.to_string()),
                ("product", term.product.to_string()),
            ])?;
        }
        rep.human(format!("total: {} (log2 = {:.2})", t.total, t.log2_total()))?;
        return rep.record(&[
            ("N", big_n.to_string()),
            ("total", t.total.to_string()),
            ("log2_total", format!("{:.4}", t.log2_total())),
        ]);
    }
    let (Some(n), Some(d)) = (a.n, a.d) else {
        return Err(Error::InvalidParameter("census needs --n and --d, or --total".into()));
    };
    let r = census::count(n, d, budget, a.exact)?;
    let exact = r.exact.as_ref().map_or("-".to_string(), |e| e.to_string());
    rep.human(format!(
        "{:>3} {:>3} {:>14} {:>14} {:>14}  {}",
        "n", "d", "exact", "nu", "mu", "method"
    ))?;
    rep.human(format!(
        "{:>3} {:>3} {:>14} {:>14} {:>14}  {}",
        n, d, exact, r.nu, r.mu, r.method
    ))?;
    rep.record(&[
        ("n", n.to_string()),
        ("d", d.to_string()),
        ("q", r.q.to_string()),
        ("exact", exact),
        ("nu", r.nu.to_string()),
        ("mu", r.mu.to_string()),
        ("method", r.method.to_string()),
    ])?;
    if r.nu_exceeds_exact() {
        rep.human("warning: the lower bound exceeds the exact count")?;
        rep.record(&[("nu_exceeds_exact", "true".into())])?;
    }
    if a.ratio {
        let c = census::ratio_bound_check(n, d)?;
        let ratio = c.ratio.to_string();
        let bound = num_traits::ToPrimitive::to_f64(&c.bound_upper).unwrap_or(f64::NAN);
        rep.human(format!(
            "mu/nu = {ratio} <= {:.6}: {}",
            bound,
            if c.holds { "holds" } else { "fails" }
        ))?;
        rep.record(&[
            ("ratio", ratio),
            ("bound", format!("{bound:.6}")),
            ("holds", c.holds.to_string()),
        ])?;
    }
    Ok(())
}

fn cmd_validate(file: &Path, rep: &mut Report) -> Result<()> {
    let hs = read_hsum(file)?;
    let r = hs.validate();
    rep.human(format!("n = {}, d = {}", hs.n(), hs.d()))?;
    rep.human(format!("symmetric:              {}", r.symmetric))?;
    rep.human(format!("zero diagonal:          {}", r.zero_diagonal))?;
    rep.human(format!("nonzero:                {}", r.nonzero))?;
    rep.human(format!("F2 rank:                {}", r.rank))?;
    rep.human(format!("dim U:                  {}", r.dim_u))?;
    rep.human(format!("practical hidden sum:   {}", r.is_practical_hidden_sum))?;
    rep.human(format!("dim U exactly d:        {}", r.exact_dim_u))?;
    rep.human(format!("grid:\n{}", hs.bfrak()))?;
    rep.record(&[
        ("n", hs.n().to_string()),
        ("d", hs.d().to_string()),
        ("symmetric", r.symmetric.to_string()),
        ("zero_diagonal", r.zero_diagonal.to_string()),
        ("nonzero", r.nonzero.to_string()),
        ("rank", r.rank.to_string()),
        ("dim_u", r.dim_u.to_string()),
        ("is_practical_hidden_sum", r.is_practical_hidden_sum.to_string()),
        ("exact_dim_u", r.exact_dim_u.to_string()),
    ])
}

fn report_samples(
    basis: &SolutionBasis,
    count: usize,
    seed: u64,
    full_rank_only: bool,
    rep: &mut Report,
) -> Result<()> {
    rep.seed(seed)?;
    for (k, hs) in basis.sample_solutions(count, seed, full_rank_only)?.iter().enumerate() {
        let v = hs.validate();
        rep.human(format!("sample {}: rank {}, dim U {}", k + 1, v.rank, v.dim_u))?;
        rep.human(hs.compact())?;
        rep.record(&[
            ("sample", (k + 1).to_string()),
            ("rank", v.rank.to_string()),
            ("dim_u", v.dim_u.to_string()),
            (
                "grid",
                hs.bfrak()
                    .entries()
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ])?;
    }
    Ok(())
}

fn cmd_linearize(a: &LinearizeArgs, rep: &mut Report) -> Result<()> {
    let lam = read_matrix(&a.lambda)?;
    let pi = read_matrix(&a.pi)?;
    let lin = linearize(&lam, &pi, a.n, a.d)?;
    rep.human(format!(
        "system: {} rows x {} unknowns",
        lin.system_rows, lin.system_cols
    ))?;
    rep.human(format!("kernel dimension: {}", lin.basis.dim()))?;
    rep.human(format!(
        "time: build {:.3?}, solve {:.3?}",
        lin.build_time, lin.solve_time
    ))?;
    rep.record(&[
        ("rows", lin.system_rows.to_string()),
        ("cols", lin.system_cols.to_string()),
        ("kernel_dimension", lin.basis.dim().to_string()),
    ])?;
    if let Some(path) = &a.emit_basis {
        fs::write(path, lin.basis.to_text())?;
        rep.human(format!("basis written to {}", path.display()))?;
    }
    if let Some(k) = a.sample {
        report_samples(&lin.basis, k, a.seed.unwrap_or(DEFAULT_SEED), a.full_rank_only, rep)?;
    }
    Ok(())
}

fn cmd_proper(a: &ProperArgs, rep: &mut Report) -> Result<()> {
    let lam = read_matrix(&a.lambda)?;
    let r = tbcipher::is_proper_mixing_layer(&lam, a.bricks, a.brick_size)?;
    let witness = r
        .witness
        .as_ref()
        .map(|w| w.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    if r.proper {
        rep.human(format!("proper ({} walls checked)", r.walls_checked))?;
    } else {
        rep.human(format!(
            "not proper: wall of bricks {{{}}} is invariant",
            witness.clone().unwrap_or_default()
        ))?;
    }
    rep.record(&[
        ("proper", r.proper.to_string()),
        ("walls_checked", r.walls_checked.to_string()),
        ("witness", witness.unwrap_or_else(|| "-".into())),
    ])
}

fn cmd_present(a: &PresentArgs, rep: &mut Report) -> Result<()> {
    if let Some(p) = &a.emit_lambda {
        fs::write(p, tbcipher::present_mixing_layer().to_text())?;
        rep.human(format!("λ_P written to {}", p.display()))?;
    }
    if let Some(p) = &a.emit_pi {
        fs::write(p, tbcipher::present_pi().to_text())?;
        rep.human(format!("π_P written to {}", p.display()))?;
    }
    if !a.repro {
        if a.emit_lambda.is_none() && a.emit_pi.is_none() {
            return Err(Error::InvalidParameter(
                "present needs --repro, --emit-lambda or --emit-pi".into(),
            ));
        }
        return Ok(());
    }
    let start = Instant::now();
    let lam = tbcipher::present_mixing_layer();
    let pi = tbcipher::present_pi();
    let fixed = fixed_coordinates(&tbcipher::present_permutation());
    let lin = linearize(&lam, &pi, 60, 4)?;
    let lower_left_zero = lam.conjugate(&pi)?.submatrix(60, 0, 4, 60).is_zero();
    let lambda3_identity = *lin.block.lambda3() == BitMatrix::identity(4);
    let lambda2_zero = lin.block.lambda2().is_zero();
    let fixed_str = fixed.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    rep.human(format!("fixed coordinates of λ_P: {fixed_str}"))?;
    rep.human(format!(
        "π_P λ_P π_P⁻¹: lower-left zero {lower_left_zero}, Λ₂ zero {lambda2_zero}, Λ₃ = I₄ {lambda3_identity}"
    ))?;
    rep.human(format!(
        "system: {} rows x {} unknowns",
        lin.system_rows, lin.system_cols
    ))?;
    rep.human(format!("kernel dimension: {}", lin.basis.dim()))?;
    rep.record(&[
        ("fixed", fixed_str),
        ("lower_left_zero", lower_left_zero.to_string()),
        ("lambda3_identity", lambda3_identity.to_string()),
        ("rows", lin.system_rows.to_string()),
        ("cols", lin.system_cols.to_string()),
        ("kernel_dimension", lin.basis.dim().to_string()),
    ])?;
    let seed = a.seed.unwrap_or(DEFAULT_SEED);
    report_samples(&lin.basis, 1, seed, true, rep)?;
    rep.human(format!("time: {:.3?}", start.elapsed()))
}

fn cmd_attack(a: &AttackArgs, rep: &mut Report) -> Result<()> {
    let seed = a.seed.unwrap_or(DEFAULT_SEED);
    rep.seed(seed)?;
    let hs = HiddenSum::random(a.n, a.d, seed)?;
    let oracle = CircAffineOracle::random(&hs, seed.wrapping_add(1));
    let m = reconstruct(|x| oracle.eval(x).expect("sizes match"), &hs);
    let mode = if a.exhaustive {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::Sampled(10_000)
    };
    let r = verify_reconstruction(|x| oracle.eval(x).expect("sizes match"), &m, mode, seed)?;
    rep.human(format!("hidden sum: n = {}, d = {}, N = {}", a.n, a.d, hs.dim()))?;
    rep.human(format!("queries: {}", m.queries()))?;
    rep.human(format!("agreement: {}/{} ({:.4})", r.agreed, r.checked, r.agreement()))?;
    if let Some(c) = &r.counterexample {
        rep.human(format!(
            "counterexample: {} -> oracle {}, predicted {}",
            c.input, c.oracle, c.predicted
        ))?;
    }
    rep.record(&[
        ("n", a.n.to_string()),
        ("d", a.d.to_string()),
        ("queries", m.queries().to_string()),
        ("checked", r.checked.to_string()),
        ("agreed", r.agreed.to_string()),
        (
            "counterexample",
            r.counterexample.as_ref().map_or("-".into(), |c| c.input.to_string()),
        ),
    ])
}
