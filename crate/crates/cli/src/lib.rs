//! The `prodbase` command-line tool.
//!
//! Exit codes: 0 success / valid basis, 1 structurally invalid basis,
//! 2 usage or parse error.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use prodbase::{
    check_groupable, check_pairwise_condition, classify, generate_from_type, left_classify,
    mu_check, named_family, partition_count, partitions_of, type_count_lower_bound,
    verify_product_basis, BasisFile, ComplexVector, Factorization, FamilyParams, FamilyTag,
    PairMode, Partition, ProductBasis, SubspaceMode, Tolerances, TypeSpec,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "prodbase",
    version,
    about = "Verify, classify and generate product bases of C^2 ⊗ C^n"
)]
pub struct Cli {
    #[command(flatten)]
    pub tolerances: TolArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Orthogonality tolerance.
    #[arg(long, global = true, env = "PRODBASE_TOL_ORTH")]
    pub tol_orth: Option<f64>,

    /// Singular-value cutoff for product detection.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check orthonormality and product structure of a basis file.
    Verify { path: PathBuf },
    /// Decompose a product basis and print its right type.
    Classify { path: PathBuf },
    /// Generate a product basis with a given right type, e.g. `generate 6 3+2+1`.
    Generate {
        n: usize,
        partition: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Independent)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = SubspacesArg::Random)]
        subspaces: SubspacesArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit one of the named families (triples write three files).
    Family {
        tag: String,
        /// alpha for d6_B1, as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// beta for d6_B1, as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise mutual-unbiasedness of two or more basis files.
    MubCheck {
        #[arg(required = true, num_args = 2..)]
        paths: Vec<PathBuf>,
    },
    /// List the partitions of n and the type-count lower bound.
    Partitions { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Equal,
    Independent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SubspacesArg {
    Identity,
    Random,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Io(err)
    }
}

type Outcome = Result<u8, Failure>;

fn usage(msg: impl ToString) -> Failure {
    Failure::Usage(msg.to_string())
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = tolerances(&cli.tolerances).and_then(|tol| match &cli.command {
        Command::Verify { path } => cmd_verify(path, &tol, out),
        Command::Classify { path } => cmd_classify(path, &tol, out),
        Command::Generate {
            n,
            partition,
            seed,
            mode,
            subspaces,
            out: path,
        } => cmd_generate(
            *n,
            partition,
            *seed,
            *mode,
            *subspaces,
            path.as_deref(),
            out,
        ),
        Command::Family {
            tag,
            alpha,
            beta,
            out: path,
        } => cmd_family(tag, alpha.as_deref(), beta.as_deref(), path.as_deref(), out),
        Command::MubCheck { paths } => cmd_mub_check(paths, &tol, out),
        Command::Partitions { n } => cmd_partitions(*n, out),
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn tolerances(args: &TolArgs) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(orth) = args.tol_orth {
        tol = tol.with_orth(orth).map_err(usage)?;
    }
    if let Some(rank) = args.tol_rank {
        tol = tol.with_rank(rank).map_err(usage)?;
    }
    Ok(tol)
}

fn load(path: &Path) -> Result<ProductBasis, Failure> {
    let file = BasisFile::load(path).map_err(usage)?;
    file.to_basis()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_verify(path: &Path, tol: &Tolerances, out: &mut dyn Write) -> Outcome {
    let mut basis = load(path)?;
    let check = verify_product_basis(&mut basis, tol);
    writeln!(
        out,
        "dims: 2 x {} ({} vectors)",
        basis.n(),
        basis.vectors().len()
    )?;
    writeln!(
        out,
        "orthonormality residual: {:.3e} ({})",
        check.gram_residual,
        if check.orthonormal { "ok" } else { "FAILED" }
    )?;
    for (k, f) in check.factors.iter().enumerate() {
        match f {
            Factorization::Product(p) => {
                writeln!(out, "vector {k}: product a = {} b = {}", p.a, p.b)?
            }
            Factorization::NotProduct { sigma2 } => writeln!(
                out,
                "vector {k}: NOT a product vector (sigma2 = {sigma2:.3e})"
            )?,
        }
    }

    // Pairwise and groupability checks need factors, not orthonormality.
    let mut factored = basis.clone();
    let all_products = factored.factor(tol).is_ok();
    let (pairwise, groupable) = if all_products {
        (
            Some(check_pairwise_condition(&factored, tol).map_err(usage)?),
            Some(check_groupable(&factored, tol).map_err(usage)?),
        )
    } else {
        (None, None)
    };
    let show = |v: Option<bool>| match v {
        Some(true) => "holds",
        Some(false) => "violated",
        None => "n/a (not all vectors are products)",
    };
    writeln!(out, "pairwise orthogonality condition: {}", show(pairwise))?;
    writeln!(
        out,
        "groupable into antipodal pairs and two qudit bases: {}",
        show(groupable)
    )?;

    let verdict = if check.ok {
        "product basis"
    } else if groupable == Some(true) && !check.orthonormal {
        "groupable but not orthonormal"
    } else if !check.orthonormal {
        "not orthonormal"
    } else {
        "not a product basis"
    };
    writeln!(out, "verdict: {verdict}")?;
    Ok(if check.ok { EXIT_OK } else { EXIT_INVALID })
}

fn join(vs: &[ComplexVector]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_classify(path: &Path, tol: &Tolerances, out: &mut dyn Write) -> Outcome {
    let basis = load(path)?;
    let report = classify(&basis, tol);
    writeln!(out, "gram residual: {:.3e}", report.gram_residual)?;
    if !report.valid {
        writeln!(out, "valid: no")?;
        for d in &report.diagnostics {
            writeln!(out, "  {d}")?;
        }
        return Ok(EXIT_INVALID);
    }
    writeln!(out, "valid: yes")?;
    writeln!(out, "n = {}, r = {}", report.n, report.r())?;
    for (k, block) in report.blocks.iter().enumerate() {
        writeln!(out, "block {}: multiplicity {}", k + 1, block.multiplicity)?;
        writeln!(out, "  a  = {}  (members {:?})", block.a, block.a_indices)?;
        writeln!(
            out,
            "  a⊥ = {}  (members {:?})",
            block.a_perp, block.a_perp_indices
        )?;
        writeln!(out, "  A(a)  = {{{}}}", join(&block.group_a))?;
        writeln!(out, "  A(a⊥) = {{{}}}", join(&block.group_a_perp))?;
        if block.groups_coincide {
            writeln!(out, "  A(a) and A(a⊥) coincide")?;
        }
    }
    writeln!(out, "B1(n) = {{{}}}", join(&report.basis_b1n))?;
    writeln!(out, "B2(n) = {{{}}}", join(&report.basis_b2n))?;
    if let Some(left) = left_classify(&basis, tol) {
        writeln!(out, "left type: {left}")?;
    }
    let right = report.right_type.as_ref().expect("valid report has a type");
    if report.is_direct_product {
        writeln!(out, "right type: {right} (direct product)")?;
    } else {
        writeln!(out, "right type: {right}")?;
    }
    Ok(EXIT_OK)
}

fn write_basis(file: &BasisFile, path: Option<&Path>, out: &mut dyn Write) -> io::Result<()> {
    match path {
        Some(p) => {
            file.save(p).map_err(|e| io::Error::other(e.to_string()))?;
            writeln!(out, "wrote {}", p.display())
        }
        None => out.write_all(file.to_json().as_bytes()),
    }
}

fn cmd_generate(
    n: usize,
    partition: &str,
    seed: u64,
    mode: ModeArg,
    subspaces: SubspacesArg,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let partition: Partition = partition.parse().map_err(usage)?;
    if partition.n() != n {
        return Err(usage(format!(
            "partition {partition} does not sum to n = {n}"
        )));
    }
    let spec = TypeSpec::new(partition.clone(), seed)
        .pair_mode(match mode {
            ModeArg::Equal => PairMode::EqualGroups,
            ModeArg::Independent => PairMode::IndependentGroups,
        })
        .subspace_mode(match subspaces {
            SubspacesArg::Identity => SubspaceMode::IdentityBlocks,
            SubspacesArg::Random => SubspaceMode::HaarRandom,
        });
    let basis = generate_from_type(&spec).map_err(usage)?;
    let file = BasisFile::from_basis(&basis)
        .with_meta("family", "generated")
        .with_meta("partition", partition.to_string())
        .with_meta("seed", seed)
        .with_meta("mode", format!("{mode:?}").to_lowercase())
        .with_meta("subspaces", format!("{subspaces:?}").to_lowercase());
    write_basis(&file, path, out)?;
    Ok(EXIT_OK)
}

/// Parses `re` or `re,im`.
fn parse_complex(text: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| usage(format!("bad complex number {text:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(usage(format!("bad complex number {text:?}"))),
    }
}

/// `dir/name.json` → `dir/name.{k}.json`.
fn indexed_path(path: &Path, k: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{k}"),
    };
    path.with_file_name(name)
}

fn cmd_family(
    tag: &str,
    alpha: Option<&str>,
    beta: Option<&str>,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let family: FamilyTag = tag.parse().map_err(usage)?;
    if family == FamilyTag::GeneralMupbTriple {
        return Err(usage(
            "general_mupb_triple needs user-supplied qudit bases; use the library API",
        ));
    }
    let mut params = FamilyParams::new(family);
    match (alpha, beta) {
        (None, None) => {}
        (Some(a), Some(b)) => {
            params = params.with_unitary_params(vec![parse_complex(a)?, parse_complex(b)?]);
        }
        _ => return Err(usage("--alpha and --beta must be given together")),
    }
    let bases = named_family(&params).map_err(usage)?.into_bases();
    let count = bases.len();
    for (k, basis) in bases.iter().enumerate() {
        let mut file = BasisFile::from_basis(basis).with_meta("family", family.name());
        if count > 1 {
            file = file.with_meta("member", k);
        }
        let target = match path {
            Some(p) if count > 1 => Some(indexed_path(p, k)),
            Some(p) => Some(p.to_path_buf()),
            None => None,
        };
        write_basis(&file, target.as_deref(), out)?;
    }
    Ok(EXIT_OK)
}

fn cmd_mub_check(paths: &[PathBuf], tol: &Tolerances, out: &mut dyn Write) -> Outcome {
    let bases = paths
        .iter()
        .map(|p| load(p))
        .collect::<Result<Vec<_>, _>>()?;
    let count = bases.len();
    let mut matrix = vec![vec![None::<f64>; count]; count];
    let mut all_ok = true;
    for i in 0..count {
        for j in (i + 1)..count {
            match mu_check(bases[i].vectors(), bases[j].vectors(), tol) {
                Ok((ok, dev)) => {
                    matrix[i][j] = Some(dev);
                    matrix[j][i] = Some(dev);
                    all_ok &= ok;
                    writeln!(
                        out,
                        "{} vs {}: {} (deviation {dev:.3e})",
                        paths[i].display(),
                        paths[j].display(),
                        if ok { "unbiased" } else { "NOT unbiased" }
                    )?;
                }
                Err(e) => {
                    all_ok = false;
                    writeln!(out, "{} vs {}: {e}", paths[i].display(), paths[j].display())?;
                }
            }
        }
    }
    writeln!(out, "deviation matrix:")?;
    for row in &matrix {
        let cells: Vec<String> = row
            .iter()
            .map(|d| d.map_or_else(|| "-".to_string(), |d| format!("{d:.3e}")))
            .collect();
        writeln!(out, "  {}", cells.join("  "))?;
    }
    writeln!(
        out,
        "{}",
        if all_ok {
            "all pairs mutually unbiased"
        } else {
            "some pairs are not mutually unbiased"
        }
    )?;
    Ok(if all_ok { EXIT_OK } else { EXIT_INVALID })
}

fn cmd_partitions(n: usize, out: &mut dyn Write) -> Outcome {
    let all = partitions_of(n).map_err(usage)?;
    for p in &all {
        writeln!(out, "{p}")?;
    }
    let count = partition_count(n).map_err(usage)?;
    let bound = type_count_lower_bound(n).map_err(usage)?;
    writeln!(out, "p({n})={count}, type lower bound {bound}")?;
    Ok(EXIT_OK)
}
