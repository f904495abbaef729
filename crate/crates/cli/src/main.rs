use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qclif_core::encoding::enumerate_group;
use qclif_core::frames::{compile_to_frame, compose_frames, invert_frame, read_frame, write_frame};
use qclif_core::lang::program::Clifford;
use qclif_core::lang::syntax::{CValue, PValue};
use qclif_core::oracle::{encoding_from_unitary, gate_matrix, read_unitary, verify_encoding, Gate};
use qclif_core::symplectic::lift_symplectic;
use qclif_core::{Dim, Error, Layout, Machine, Matrix, Program};

#[derive(Parser)]
#[command(name = "qclif", version, about = "Check, run and compile qudit Clifford programs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck every definition in a program.
    Check {
        file: PathBuf,
        /// Qudit dimension, overriding the file's `dim` header.
        #[arg(long)]
        d: Option<u64>,
    },
    /// Apply a definition (or its inverse) to a Pauli.
    Run {
        file: PathBuf,
        name: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        d: Option<u64>,
        /// Parameter values, in declaration order.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        inverse: bool,
    },
    /// Compile a definition to its Pauli frame.
    Frame {
        file: PathBuf,
        name: String,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The frame of A∘B.
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Invert {
        frame: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a symplectic ψ over Z_d (JSON rows) to Z_{2d} or Z_d.
    Lift {
        file: PathBuf,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read the encoding of a named gate or a unitary file and check it densely.
    Verify {
        target: String,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Count the projective Cliffords at (d, n).
    Enumerate {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: String) -> Outcome<String> {
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn machine(d: u64) -> Outcome<Machine> {
    let m = Machine::new(d)?;
    match std::env::var("QCLIF_FUEL") {
        Ok(s) => {
            let fuel = s.parse().map_err(|_| Failure::Usage(format!("QCLIF_FUEL must be a number, got {s:?}")))?;
            Ok(m.with_fuel(fuel))
        }
        Err(_) => Ok(m),
    }
}

fn load(file: &Path, d: Option<u64>) -> Outcome<(Machine, Program)> {
    let prog = Program::parse(&read(file)?)?;
    let d = d.or(prog.dim()).ok_or_else(|| {
        Failure::Usage(format!("{} has no dim header; pass --d", file.display()))
    })?;
    Ok((machine(d)?, prog))
}

fn compile(m: &Machine, prog: &Program, name: &str, params: &[String]) -> Outcome<Clifford> {
    let def = prog.get(name)?;
    if params.len() != def.params().len() {
        return Err(Failure::Usage(format!("{name} takes {} parameters, got {}", def.params().len(), params.len())));
    }
    let args = def
        .params()
        .iter()
        .zip(params)
        .map(|((_, ty), src)| Ok(m.eval_surface(src, ty)?.value))
        .collect::<Outcome<Vec<CValue>>>()?;
    Ok(m.instantiate(def, &args)?)
}

fn pauli_json(d: u64, p: &PValue) -> Outcome<String> {
    let p = p.to_pauli(d)?;
    Ok(json!({"t": p.t(), "v": p.v().to_layout(Layout::Separated).entries()}).to_string())
}

fn run(cli: Cli) -> Outcome<String> {
    let format = cli.format;
    match cli.command {
        Command::Check { file, d } => {
            let (m, prog) = load(&file, d)?;
            let lines: Vec<String> = m
                .check_program(&prog)?
                .iter()
                .map(|f| match format {
                    Format::Text => format!("{} : {} -o {}", f.name, f.input, f.output),
                    Format::Json => {
                        json!({"name": f.name, "input": f.input.to_string(), "output": f.output.to_string()}).to_string()
                    }
                })
                .collect();
            Ok(lines.join("\n") + "\n")
        }
        Command::Run { file, name, input, d, params, inverse } => {
            let (m, prog) = load(&file, d)?;
            let f = compile(&m, &prog, &name, &params)?;
            let ty = if inverse { &f.output } else { &f.input };
            let arg = m.eval_surface(&input, ty)?;
            let out = if inverse { m.apply_inverse(&f, &arg)? } else { m.apply(&f, &arg)? };
            Ok(match format {
                Format::Text => format!("{out}\n"),
                Format::Json => pauli_json(m.d(), &out)? + "\n",
            })
        }
        Command::Frame { file, name, d, params, out } => {
            let (m, prog) = load(&file, d)?;
            let f = compile(&m, &prog, &name, &params)?;
            emit(&out, write_frame(&compile_to_frame(&m, &f)?))
        }
        Command::Compose { a, b, out } => {
            let fa = read_frame(&read(&a)?)?;
            let fb = read_frame(&read(&b)?)?;
            emit(&out, write_frame(&compose_frames(&fa, &fb)?))
        }
        Command::Invert { frame, out } => emit(&out, write_frame(&invert_frame(&read_frame(&read(&frame)?)?)?)),
        Command::Lift { file, d, out } => {
            let rows: Vec<Vec<i64>> =
                serde_json::from_str(&read(&file)?).map_err(|e| Error::new(qclif_core::ErrorKind::FormatError, e.to_string()))?;
            let phi = lift_symplectic(&Matrix::from_rows(d, &rows)?)?;
            let text = match format {
                Format::Text => format!("{phi}\n"),
                Format::Json => json!({"modulus": phi.modulus(), "rows": phi.to_rows()}).to_string() + "\n",
            };
            emit(&out, text)
        }
        Command::Verify { target, d, tolerance } => {
            let u = match target.parse::<Gate>() {
                Ok(gate) => gate_matrix(gate, d)?,
                Err(_) => read_unitary(&read(Path::new(&target))?, d)?,
            };
            let enc = encoding_from_unitary(&u)?;
            if !verify_encoding(&enc, &u, tolerance)? {
                return Err(Error::new(
                    qclif_core::ErrorKind::NotClifford,
                    format!("{enc} disagrees with the unitary beyond {tolerance}"),
                )
                .into());
            }
            Ok(match format {
                Format::Text => format!("{enc}\n"),
                Format::Json => {
                    json!({"d": d, "n": enc.dim().n(), "mu": enc.mu(), "psi": enc.psi().to_rows()}).to_string() + "\n"
                }
            })
        }
        Command::Enumerate { d, n } => {
            let count = enumerate_group(Dim::new(d, n)?)?.count();
            Ok(match format {
                Format::Text => format!("{count}\n"),
                Format::Json => json!({"d": d, "n": n, "count": count}).to_string() + "\n",
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("ERROR {}: {}", e.kind, e.message.replace('\n', " "));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
