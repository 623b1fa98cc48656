//! `forge` — a calculator for finite algebras, quasi-variety entailment,
//! matrix powers, contextual translations and the induced adjunctions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use forge::catalog::{self, CatalogClass};
use forge::format;
use forge_core::adjoint::{
    apply_left_adjoint, apply_right_adjoint, verify_homset_bijection, verify_sigma_iso,
    RightAdjointSpec,
};
use forge_core::classes::free_algebra;
use forge_core::finalg::{enumerate_homs, FiniteAlgebra};
use forge_core::matpow::{full_matrix_language, matrix_power, DEFAULT_UNIVERSE_LIMIT};
use forge_core::terms::parse_term;
use forge_core::xlate::{
    check_condition1, check_condition2, check_nontrivial, derive_translation,
    ContextualTranslation, Deduction,
};

#[derive(Parser)]
#[command(name = "forge", version, about = "finite-algebra adjunction calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect algebra files and catalog algebras
    Alg {
        #[command(subcommand)]
        command: AlgCommand,
    },
    /// Build the free algebra of a catalog class on a finite set of generators
    Free {
        /// Catalog class name (e.g. DL01)
        #[arg(long)]
        class: String,
        /// Number of free generators
        #[arg(long)]
        gens: usize,
    },
    /// Enumerate all homomorphisms between two algebras
    Homs {
        /// Source algebra (CLASS:name or file path)
        #[arg(long)]
        from: String,
        /// Target algebra (CLASS:name or file path)
        #[arg(long)]
        to: String,
    },
    /// Decide whether a class entails a deduction
    Entails {
        /// Catalog class name
        #[arg(long)]
        class: String,
        /// Deduction: "<vars>; <premise>; ... |- <conclusion>"
        deduction: String,
    },
    /// Build a matrix power of an algebra under the full induced language
    Matpow {
        /// Base algebra (CLASS:name or file path)
        #[arg(long)]
        algebra: String,
        /// Exponent
        #[arg(long)]
        kappa: usize,
    },
    /// Solve a translation's context inside the matrix power of an algebra
    ThetaSub(TranslationOnAlgebra),
    /// Check, apply or derive contextual translations
    Translate {
        #[command(subcommand)]
        command: TranslateCommand,
    },
    /// Compute and verify the adjunction induced by a translation
    Adjoint {
        #[command(subcommand)]
        command: AdjointCommand,
    },
    /// Inspect the built-in catalog
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum AlgCommand {
    /// Validate an algebra file
    Check { file: String },
    /// Print an algebra in the standard file format
    Show { reference: String },
}

#[derive(Args)]
struct TranslationOnAlgebra {
    /// Translation (catalog name or file path)
    #[arg(long)]
    translation: String,
    /// Target-signature algebra (CLASS:name or file path)
    #[arg(long)]
    algebra: String,
}

#[derive(Subcommand)]
enum TranslateCommand {
    /// Verify the translation's defining conditions on the catalog batteries
    Check {
        #[arg(long)]
        translation: String,
    },
    /// Lift a source-signature term to its tuple of target terms
    Apply {
        #[arg(long)]
        translation: String,
        /// Source-signature term, e.g. "neg(meet(x0, x1))"
        #[arg(long)]
        term: String,
    },
    /// Re-derive a catalog translation from its functor data
    Derive {
        /// Catalog translation with functor data (e.g. kleene)
        #[arg(long)]
        functor: String,
    },
}

#[derive(Subcommand)]
enum AdjointCommand {
    /// Apply the right adjoint to a target-class algebra
    Right(TranslationOnAlgebra),
    /// Apply the left adjoint to a source-class presentation
    Left {
        #[arg(long)]
        translation: String,
        /// Presentation "<generators>; <eq>; ..."
        #[arg(long)]
        presentation: String,
    },
    /// Verify the hom-set bijection for a presentation and an algebra
    Verify {
        #[arg(long)]
        translation: String,
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        algebra: String,
    },
    /// Verify the decomposition isomorphism on a target-class algebra
    Sigma(TranslationOnAlgebra),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List catalog classes, algebras and translations
    List,
}

/// A translation resolved against the catalog: the batteries and axioms of
/// its endpoint classes are needed by every adjunction command.
struct Resolved {
    name: String,
    ct: ContextualTranslation,
    source: CatalogClass,
    target: CatalogClass,
    deductions: Vec<Deduction>,
}

impl Resolved {
    fn spec(&self) -> Result<RightAdjointSpec, String> {
        RightAdjointSpec::new(
            self.ct.clone(),
            self.source.battery.clone(),
            self.target.battery.clone(),
            self.source.axioms.clone(),
        )
        .map_err(|e| format!("translation {}: {e}", self.name))
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn failure(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("{msg}");
    ExitCode::FAILURE
}

fn universe_limit() -> Result<usize, String> {
    match std::env::var("FORGE_MAX_UNIVERSE") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("FORGE_MAX_UNIVERSE must be a number, got {v:?}")),
        Err(_) => Ok(DEFAULT_UNIVERSE_LIMIT),
    }
}

fn resolve_class(name: &str) -> Result<CatalogClass, String> {
    catalog::class(name).ok_or_else(|| format!("unknown catalog class {name:?}"))
}

/// Resolves `CLASS:name` against the catalog, anything else as a file path.
fn resolve_algebra(reference: &str) -> Result<FiniteAlgebra, String> {
    if let Some((class_name, alg_name)) = reference.split_once(':') {
        if let Some(c) = catalog::class(class_name) {
            return c
                .algebra(alg_name)
                .cloned()
                .ok_or_else(|| format!("class {class_name} has no algebra {alg_name:?}"));
        }
    }
    let text = std::fs::read_to_string(reference)
        .map_err(|e| format!("cannot read {reference:?}: {e}"))?;
    format::parse_algebra(&text, reference).map_err(|e| format!("{reference}: {e}"))
}

fn resolve_translation(reference: &str) -> Result<Resolved, String> {
    if let Some(t) = catalog::translation(reference) {
        return Ok(Resolved {
            name: t.name.to_string(),
            source: t.source_class(),
            target: t.target_class(),
            ct: t.ct,
            deductions: t.deductions,
        });
    }
    let text = std::fs::read_to_string(reference)
        .map_err(|e| format!("no catalog translation and no readable file {reference:?}: {e}"))?;
    let file = format::parse_translation(&text).map_err(|e| format!("{reference}: {e}"))?;
    let source = resolve_class(&file.source)
        .map_err(|_| format!("{reference}: source {:?} is not a catalog class", file.source))?;
    let target = resolve_class(&file.target)
        .map_err(|_| format!("{reference}: target {:?} is not a catalog class", file.target))?;
    Ok(Resolved {
        name: reference.to_string(),
        ct: file.ct,
        source,
        target,
        deductions: Vec::new(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = match universe_limit() {
        Ok(l) => l,
        Err(e) => return usage(e),
    };
    match cli.command {
        Command::Alg { command } => match command {
            AlgCommand::Check { file } => {
                let text = match std::fs::read_to_string(&file) {
                    Ok(t) => t,
                    Err(e) => return usage(format!("cannot read {file:?}: {e}")),
                };
                match format::parse_algebra(&text, &file) {
                    Ok(a) => {
                        println!(
                            "ok: signature {} with {} operations, size {}",
                            a.signature().name(),
                            a.signature().ops().len(),
                            a.size()
                        );
                        ExitCode::SUCCESS
                    }
                    Err(e) => failure(format!("invalid: {e}")),
                }
            }
            AlgCommand::Show { reference } => match resolve_algebra(&reference) {
                Ok(a) => {
                    print!("{}", format::render_algebra(&a));
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            },
        },

        Command::Free { class, gens } => {
            let c = match resolve_class(&class) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let free = match free_algebra(&c.battery, gens) {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            println!("size {}", free.algebra.size());
            for e in 0..free.algebra.size() {
                println!("{e}: {}", free.term_of(e));
            }
            ExitCode::SUCCESS
        }

        Command::Homs { from, to } => {
            let (a, b) = match (resolve_algebra(&from), resolve_algebra(&to)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return usage(e),
            };
            let homs = match enumerate_homs(&a, &b) {
                Ok(h) => h,
                Err(e) => return usage(e),
            };
            println!("count {}", homs.len());
            for h in &homs {
                let map: Vec<String> = h.map().iter().map(|v| v.to_string()).collect();
                println!("hom {}", map.join(" "));
            }
            ExitCode::SUCCESS
        }

        Command::Entails { class, deduction } => {
            let c = match resolve_class(&class) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let d = match format::parse_deduction(&deduction, c.signature()) {
                Ok(d) => d,
                Err(e) => return usage(e),
            };
            let q = forge_core::terms::QuasiEquation::new(d.premises, d.conclusion);
            match c.battery.countermodel(&q) {
                None => {
                    println!("YES");
                    ExitCode::SUCCESS
                }
                Some((gen, assignment)) => {
                    println!("NO");
                    let vals: Vec<String> =
                        assignment.iter().map(|v| v.to_string()).collect();
                    eprintln!(
                        "countermodel: generator {gen}, assignment [{}]",
                        vals.join(", ")
                    );
                    ExitCode::FAILURE
                }
            }
        }

        Command::Matpow { algebra, kappa } => {
            let a = match resolve_algebra(&algebra) {
                Ok(a) => a,
                Err(e) => return usage(e),
            };
            let lang = match full_matrix_language(a.signature(), kappa) {
                Ok(l) => l,
                Err(e) => return usage(e),
            };
            match matrix_power(&a, &lang, limit) {
                Ok(p) => {
                    print!("{}", format::render_algebra(&p));
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            }
        }

        Command::ThetaSub(args) => with_spec(&args.translation, |r, spec| {
            let b = resolve_algebra(&args.algebra).map_err(Problem::Usage)?;
            let image = apply_right_adjoint(spec, &b, limit)
                .map_err(|e| Problem::Failure(e.to_string()))?;
            let _ = r;
            print!("{}", format::render_algebra(&image));
            Ok(ExitCode::SUCCESS)
        }),

        Command::Translate { command } => match command {
            TranslateCommand::Check { translation } => {
                let r = match resolve_translation(&translation) {
                    Ok(r) => r,
                    Err(e) => return usage(e),
                };
                let mut ok = true;
                match check_condition2(&r.ct, &r.target.battery) {
                    Ok(None) => println!("condition2 PASS"),
                    Ok(Some(w)) => {
                        ok = false;
                        println!("condition2 FAIL");
                        eprintln!(
                            "context not preserved at {}: {} fails on generator {} under {:?}",
                            w.symbol, w.equation, w.generator, w.assignment
                        );
                    }
                    Err(e) => return usage(e),
                }
                if check_nontrivial(&r.ct, &r.target.battery) {
                    println!("nontrivial PASS");
                } else {
                    ok = false;
                    println!("nontrivial FAIL");
                }
                let mut passed = 0usize;
                for d in &r.deductions {
                    match check_condition1(&r.ct, &r.source.battery, &r.target.battery, d) {
                        Ok(rep) if rep.passes() => passed += 1,
                        Ok(_) => {
                            ok = false;
                            eprintln!("consequence not transferred: {}", d.conclusion);
                        }
                        Err(e) => return usage(e),
                    }
                }
                println!(
                    "condition1 {passed}/{} {}",
                    r.deductions.len(),
                    if passed == r.deductions.len() { "PASS" } else { "FAIL" }
                );
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            TranslateCommand::Apply { translation, term } => {
                let r = match resolve_translation(&translation) {
                    Ok(r) => r,
                    Err(e) => return usage(e),
                };
                let t = match parse_term(&term, r.ct.tau.source_sig()) {
                    Ok(t) => t,
                    Err(e) => return usage(e),
                };
                match r.ct.tau.lift_term(&t) {
                    Ok(tuple) => {
                        for (i, component) in tuple.iter().enumerate() {
                            println!("{i}: {component}");
                        }
                        ExitCode::SUCCESS
                    }
                    Err(e) => usage(e),
                }
            }
            TranslateCommand::Derive { functor } => {
                let t = match catalog::translation(&functor) {
                    Some(t) => t,
                    None => return usage(format!("unknown catalog translation {functor:?}")),
                };
                let Some(data) = t.functor_data.clone() else {
                    return usage(format!("translation {functor} carries no functor data"));
                };
                let source_sig = t.source_class().signature().clone();
                let target = t.target_class().battery;
                match derive_translation(&source_sig, &target, &data) {
                    Ok(ct) => {
                        print!("{}", format::render_translation(&ct, t.source, t.target));
                        ExitCode::SUCCESS
                    }
                    Err(e) => failure(e),
                }
            }
        },

        Command::Adjoint { command } => match command {
            AdjointCommand::Right(args) => with_spec(&args.translation, |_, spec| {
                let b = resolve_algebra(&args.algebra).map_err(Problem::Usage)?;
                let image = apply_right_adjoint(spec, &b, limit)
                    .map_err(|e| Problem::Failure(e.to_string()))?;
                print!("{}", format::render_algebra(&image));
                Ok(ExitCode::SUCCESS)
            }),
            AdjointCommand::Left { translation, presentation } => {
                with_spec(&translation, |r, spec| {
                    let p = format::parse_presentation(&presentation, r.source.signature())
                        .map_err(Problem::Usage)?;
                    let (algebra, out) =
                        apply_left_adjoint(spec, &p).map_err(|e| Problem::Usage(e.to_string()))?;
                    let relations: Vec<String> =
                        out.relations.iter().map(|e| format!(" {e}")).collect();
                    println!("presentation {};{}", out.lambda, relations.join(";"));
                    println!("size {}", algebra.algebra.size());
                    Ok(ExitCode::SUCCESS)
                })
            }
            AdjointCommand::Verify { translation, presentation, algebra } => {
                with_spec(&translation, |r, spec| {
                    let p = format::parse_presentation(&presentation, r.source.signature())
                        .map_err(Problem::Usage)?;
                    let b = resolve_algebra(&algebra).map_err(Problem::Usage)?;
                    let report = verify_homset_bijection(spec, &p, &b, limit)
                        .map_err(|e| Problem::Failure(e.to_string()))?;
                    println!(
                        "countLeft {} countRight {} {}",
                        report.count_left,
                        report.count_right,
                        if report.bijective { "PASS" } else { "FAIL" }
                    );
                    Ok(if report.bijective {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    })
                })
            }
            AdjointCommand::Sigma(args) => with_spec(&args.translation, |_, spec| {
                let b = resolve_algebra(&args.algebra).map_err(Problem::Usage)?;
                let iso = verify_sigma_iso(spec, &b, limit)
                    .map_err(|e| Problem::Failure(e.to_string()))?;
                println!("sigma {}", if iso { "PASS" } else { "FAIL" });
                Ok(if iso { ExitCode::SUCCESS } else { ExitCode::FAILURE })
            }),
        },

        Command::Catalog { command } => match command {
            CatalogCommand::List => {
                for c in catalog::classes() {
                    let names: Vec<&str> = c.algebras.iter().map(|(n, _)| *n).collect();
                    println!(
                        "class {} ({} operations): {}",
                        c.name,
                        c.signature().ops().len(),
                        names.join(", ")
                    );
                }
                for t in catalog::translations() {
                    println!(
                        "translation {} : {} -> {} (kappa {})",
                        t.name,
                        t.source,
                        t.target,
                        t.ct.kappa()
                    );
                }
                ExitCode::SUCCESS
            }
        },
    }
}

enum Problem {
    Usage(String),
    Failure(String),
}

/// Resolves a translation, builds its adjunction spec and runs `body`,
/// mapping resolution problems to exit code 2 and verification problems to 1.
fn with_spec(
    translation: &str,
    body: impl FnOnce(&Resolved, &RightAdjointSpec) -> Result<ExitCode, Problem>,
) -> ExitCode {
    let r = match resolve_translation(translation) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let spec = match r.spec() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    match body(&r, &spec) {
        Ok(code) => code,
        Err(Problem::Usage(e)) => usage(e),
        Err(Problem::Failure(e)) => failure(e),
    }
}
