//! `sqtori`: count, list and classify square-tiled tori.

mod output;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sqtori::arith::{self, DEFAULT_MAX_SIEVE};
use sqtori::asymptotics::{self, ZetaConstants, MAX_EXTREMAL_K};
use sqtori::lattice::{self, GeneratorPair, DEFAULT_MAX_TRIPLES};

use output::{Cell, Emitter, OutputFormat};

#[derive(Debug, Parser)]
#[command(name = "sqtori", version, about = "Cyclic and non-cyclic square-tiled tori")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "plain", global = true)]
    format: OutputFormat,

    /// Largest number of lattices `enumerate` will list
    #[arg(long, default_value_t = DEFAULT_MAX_TRIPLES, global = true)]
    max_triples: u64,

    /// Largest sieve length `sweep` will allocate
    #[arg(long, default_value_t = DEFAULT_MAX_SIEVE, global = true)]
    max_sieve: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of cyclic tori psi(n), all tori sigma(n), and their ratio
    Count { n: u64 },
    /// List every n-square torus as (w, h, t)
    Enumerate {
        n: u64,
        /// Only list cyclic tori
        #[arg(long)]
        cyclic_only: bool,
    },
    /// Invariants of the lattice spanned by u = (a, b), v = (c, d)
    #[command(allow_negative_numbers = true)]
    Classify { a: i64, b: i64, c: i64, d: i64 },
    /// psi, sigma and their running sums for n = 1..=N
    Sweep {
        #[arg(value_name = "N")]
        limit: u64,
    },
    /// rho along n_k = (p_1 ... p_k)^k for k = 1..=kmax
    Extremal {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=MAX_EXTREMAL_K as i64))]
        kmax: u32,
    },
}

type Error = Box<dyn std::error::Error>;

fn count<W: Write>(out: &mut Emitter<W>, n: u64) -> Result<(), Error> {
    let f = arith::factorize(n)?;
    let r = asymptotics::rho(&f)?;
    out.record(&[
        ("n", n.into()),
        ("psi", r.psi.into()),
        ("sigma", r.sigma.into()),
        ("rho", r.value.into()),
    ])?;
    Ok(())
}

fn enumerate<W: Write>(out: &mut Emitter<W>, n: u64, cyclic_only: bool, cap: u64) -> Result<(), Error> {
    let lattices = lattice::enumerate_lattices(n, cap)?;
    out.header(&["w", "h", "t", "cyclic"])?;
    for l in lattices {
        let cyclic = lattice::is_cyclic(&l);
        if cyclic_only && !cyclic {
            continue;
        }
        out.row(&[l.w().into(), l.h().into(), l.t().into(), cyclic.into()])?;
    }
    Ok(())
}

fn classify<W: Write>(out: &mut Emitter<W>, u: [i64; 2], v: [i64; 2]) -> Result<(), Error> {
    let g = GeneratorPair::new(u, v)?;
    let l = lattice::hnf_reduce(&g)?;
    let shape = lattice::smith_shape(&g)?;
    out.record(&[
        ("w", l.w().into()),
        ("h", l.h().into()),
        ("t", l.t().into()),
        ("index", lattice::lattice_index(&g).into()),
        ("content", lattice::content(&g).into()),
        ("d1", shape.d1.into()),
        ("d2", shape.d2.into()),
        ("cyclic", lattice::is_cyclic(&l).into()),
    ])?;
    Ok(())
}

fn sweep<W: Write>(out: &mut Emitter<W>, limit: u64, budget: u64) -> Result<(), Error> {
    let tables = arith::sieve_multiplicative(limit, budget)?;
    out.header(&["n", "psi", "sigma", "rho", "cum_psi", "cum_sigma", "cum_ratio"])?;
    let mut last = None;
    for r in asymptotics::sweep_records(&tables) {
        out.row(&[
            r.n.into(),
            r.psi.into(),
            r.sigma.into(),
            r.rho.into(),
            r.cum_psi.into(),
            r.cum_sigma.into(),
            r.cum_ratio.into(),
        ])?;
        last = Some(r);
    }
    let last = last.expect("limit >= 1");
    let deviation = (last.cum_ratio - ZetaConstants::new().inv_zeta4).abs();
    out.footer(&[
        ("n", last.n.into()),
        ("cum_ratio", last.cum_ratio.into()),
        ("deviation", deviation.into()),
    ])?;
    Ok(())
}

fn extremal<W: Write>(out: &mut Emitter<W>, kmax: u32) -> Result<(), Error> {
    let floor = ZetaConstants::new().inv_zeta2;
    out.header(&["k", "rho", "deviation"])?;
    for k in 1..=kmax {
        let rho = asymptotics::extremal_sequence_rho(k)?;
        out.row(&[(k as u64).into(), rho.into(), Cell::Float(rho - floor)])?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = Emitter::new(BufWriter::new(stdout.lock()), cli.format);
    match cli.command {
        Command::Count { n } => count(&mut out, n)?,
        Command::Enumerate { n, cyclic_only } => enumerate(&mut out, n, cyclic_only, cli.max_triples)?,
        Command::Classify { a, b, c, d } => classify(&mut out, [a, b], [c, d])?,
        Command::Sweep { limit } => sweep(&mut out, limit, cli.max_sieve)?,
        Command::Extremal { kmax } => extremal(&mut out, kmax)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
