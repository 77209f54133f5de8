use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pwlgen::bivariate::{six_stencil_cover, triangles, GridTriangulation};
use pwlgen::encodings::{brgc, truncate, zigzag_binary, zigzag_integer, CodeMatrix};
use pwlgen::generate::{gen_transport_bivariate, gen_transport_univariate};
use pwlgen::geometry::polygon_area;
use pwlgen::io::{emit_lp, emit_mps, parse_instance, Emitted, PwlInstance};
use pwlgen::model::{add_bivariate_pwl, add_univariate_pwl, Model, ObjSense, VarKind};
use pwlgen::rational::pretty;
use pwlgen::sos2::{build_for_pwl, build_logib_cover, sos2_family, Method, UnivariatePwl};
use pwlgen::verify::{
    branching_metrics, branching_table, check_biclique_representation,
    check_biclique_representation_relaxed, check_disjunctive_faces, check_ideal,
    check_sharp_lambda, check_sharp_xz, grid_adjacent, lambda_family, Branch, FaceImage,
    VerificationReport,
};
use pwlgen::{Error, Rational};

#[derive(Parser)]
#[command(
    name = "pwlgen",
    version,
    about = "MIP formulations for piecewise linear functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Lp,
    Mps,
}

#[derive(Clone, Copy, ValueEnum)]
enum Code {
    Brgc,
    Zzi,
    Zzb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    TransportUnivariate,
    BivariateGrid,
}

#[derive(Subcommand)]
enum Command {
    /// Write the model `min z s.t. z = f(x)` as an LP or MPS file.
    Emit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        /// Method for the second axis of a bivariate function.
        #[arg(long)]
        method_y: Option<Method>,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify structural properties of a formulation.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        method_y: Option<Method>,
        #[arg(long, value_delimiter = ',', default_value = "ideal,sharp,faces,cover")]
        checks: Vec<CheckName>,
    },
    /// Branching metrics of a univariate formulation.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        /// A single bound such as `y1<=0`.
        #[arg(long, required_unless_present = "table")]
        branch: Option<Branch>,
        /// Every threshold split of `y1`.
        #[arg(long)]
        table: bool,
    },
    /// Print an encoding, one tab-separated row per line.
    Encode {
        #[arg(long, value_enum)]
        code: Code,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Generate a seeded benchmark instance.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        segments: usize,
        #[arg(long)]
        seed: u64,
        /// Remove log2(segments) - 1 interior breakpoints per function.
        #[arg(long)]
        drop: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "log")]
        method: Method,
        #[arg(long)]
        sources: Option<usize>,
        #[arg(long)]
        sinks: Option<usize>,
        #[arg(long, value_enum, default_value = "mps")]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Ideal,
    Sharp,
    Faces,
    Cover,
}

enum Failure {
    Checks,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_instance(path: &Path) -> Result<PwlInstance, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn univariate_model(f: &UnivariatePwl, method: Method) -> Result<Model, Error> {
    let mut m = Model::new();
    let (lo, hi) = f.domain();
    let x = m.add_var("x", VarKind::Continuous, Some(lo.clone()), Some(hi.clone()))?;
    let z = add_univariate_pwl(&mut m, x, f, method)?;
    m.set_objective(
        ObjSense::Minimize,
        vec![(z, Rational::from_integer(1.into()))],
    )?;
    Ok(m)
}

fn bivariate_model(gt: &GridTriangulation, mx: Method, my: Method) -> Result<Model, Error> {
    let mut m = Model::new();
    let (xb, yb) = (gt.xbreaks(), gt.ybreaks());
    let x1 = m.add_var(
        "x1",
        VarKind::Continuous,
        Some(xb[0].clone()),
        xb.last().cloned(),
    )?;
    let x2 = m.add_var(
        "x2",
        VarKind::Continuous,
        Some(yb[0].clone()),
        yb.last().cloned(),
    )?;
    let z = add_bivariate_pwl(&mut m, x1, x2, gt, mx, my)?;
    m.set_objective(
        ObjSense::Minimize,
        vec![(z, Rational::from_integer(1.into()))],
    )?;
    Ok(m)
}

fn render(model: &Model, format: Format) -> Result<Emitted, Error> {
    match format {
        Format::Lp => emit_lp(model),
        Format::Mps => emit_mps(model),
    }
}

fn write_model(model: &Model, format: Format, out: &Path) -> Result<(), Failure> {
    let e = render(model, format)?;
    for w in &e.warnings {
        eprintln!("{w}");
    }
    fs::write(out, e.text)?;
    Ok(())
}

fn emit(
    input: &Path,
    method: Method,
    method_y: Option<Method>,
    format: Format,
    out: &Path,
) -> Result<(), Failure> {
    let model = match read_instance(input)? {
        PwlInstance::Univariate(f) => univariate_model(&f, method)?,
        PwlInstance::Bivariate(gt) => bivariate_model(&gt, method, method_y.unwrap_or(method))?,
    };
    write_model(&model, format, out)
}

fn verify_univariate(
    f: &UnivariatePwl,
    method: Method,
    checks: &[CheckName],
) -> Result<VerificationReport, Error> {
    let frag = build_for_pwl(method, f)?;
    let mut report = VerificationReport::default();
    for c in checks {
        match c {
            CheckName::Ideal => report.push(check_ideal(&frag)?),
            CheckName::Sharp if method.is_lambda() => report.push(check_sharp_lambda(&frag)?),
            CheckName::Sharp => report.push(check_sharp_xz(f, method)?),
            CheckName::Faces if method.is_lambda() => report.push(check_disjunctive_faces(
                &frag,
                &lambda_family(f.d() + 1, &sos2_family(f.d())),
                FaceImage::Lambda,
            )?),
            CheckName::Faces => {
                let (t, v) = (f.breakpoints(), f.values());
                let pt = |i: usize| vec![t[i].clone(), v[i].clone()];
                let family: Vec<_> = (0..f.d()).map(|i| vec![pt(i), pt(i + 1)]).collect();
                report.push(check_disjunctive_faces(&frag, &family, FaceImage::Xz)?);
            }
            CheckName::Cover if method == Method::LogIb && f.d() >= 2 => report.push(
                check_biclique_representation(&sos2_family(f.d()), &build_logib_cover(f.d())?),
            ),
            CheckName::Cover => eprintln!("cover: skipped, `{method}` has no biclique cover"),
        }
    }
    Ok(report)
}

fn verify_bivariate(
    gt: &GridTriangulation,
    mx: Method,
    my: Method,
    checks: &[CheckName],
) -> Result<VerificationReport, Error> {
    let cover = six_stencil_cover(gt);
    let frag = pwlgen::bivariate::build_bivariate(gt, Some(mx), Some(my), &cover)?;
    let family: Vec<_> = triangles(gt)
        .iter()
        .map(|t| t.iter().map(|&p| gt.lambda_index(p) + 1).collect())
        .collect();
    let mut report = VerificationReport::default();
    for c in checks {
        match c {
            CheckName::Ideal => report.push(check_ideal(&frag)?),
            CheckName::Sharp => report.push(check_sharp_lambda(&frag)?),
            CheckName::Faces => report.push(check_disjunctive_faces(
                &frag,
                &lambda_family(gt.point_count(), &family),
                FaceImage::Lambda,
            )?),
            CheckName::Cover => report.push(check_biclique_representation_relaxed(
                &triangles(gt),
                &cover,
                grid_adjacent,
            )),
        }
    }
    Ok(report)
}

fn verify(
    input: &Path,
    method: Method,
    method_y: Option<Method>,
    checks: &[CheckName],
) -> Result<(), Failure> {
    let report = match read_instance(input)? {
        PwlInstance::Univariate(f) => verify_univariate(&f, method, checks)?,
        PwlInstance::Bivariate(gt) => {
            verify_bivariate(&gt, method, method_y.unwrap_or(method), checks)?
        }
    };
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn analyze(
    input: &Path,
    method: Method,
    branch: Option<Branch>,
    table: bool,
) -> Result<(), Failure> {
    let PwlInstance::Univariate(f) = read_instance(input)? else {
        return Err(Failure::Usage("analyze needs a univariate instance".into()));
    };
    if table {
        print!("{}", branching_table(&f, method)?);
    }
    if let Some(b) = branch {
        let m = branching_metrics(&f, method, Some(&b))?;
        println!("{method} {b}: {m}");
        if let Some(poly) = &m.polygon {
            let verts: Vec<String> = poly
                .vertices()
                .iter()
                .map(|(x, z)| format!("({}, {})", pretty(x), pretty(z)))
                .collect();
            println!("projection: {}", verts.join(" "));
            debug_assert_eq!(polygon_area(poly), m.volume);
        } else {
            println!("projection: empty");
        }
    }
    Ok(())
}

fn encode(code: Code, r: usize, d: Option<usize>) -> Result<(), Failure> {
    let full: CodeMatrix = match code {
        Code::Brgc => brgc(r)?,
        Code::Zzi => zigzag_integer(r)?,
        Code::Zzb => zigzag_binary(r)?,
    };
    let m = match d {
        Some(d) => truncate(&full, d)?,
        None => full,
    };
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        println!("{}", cells.join("\t"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen(
    family: Family,
    segments: usize,
    seed: u64,
    drop: bool,
    out: &Path,
    method: Method,
    sources: Option<usize>,
    sinks: Option<usize>,
    format: Format,
) -> Result<(), Failure> {
    fs::create_dir_all(out)?;
    let ext = match format {
        Format::Lp => "lp",
        Format::Mps => "mps",
    };
    let (summary, model) = match family {
        Family::TransportUnivariate => {
            let inst = gen_transport_univariate(
                sources.unwrap_or(10),
                sinks.unwrap_or(10),
                segments,
                seed,
                drop,
            )?;
            (inst.summary(), inst.to_model(method)?)
        }
        Family::BivariateGrid => {
            if drop {
                return Err(Failure::Usage(
                    "--drop applies to transport-univariate only".into(),
                ));
            }
            let inst =
                gen_transport_bivariate(sources.unwrap_or(5), sinks.unwrap_or(5), segments, seed)?;
            (inst.summary(), inst.to_model(method, method)?)
        }
    };
    let mut json =
        serde_json::to_string_pretty(&summary).map_err(|e| Failure::Usage(e.to_string()))?;
    json.push('\n');
    fs::write(out.join("instance.json"), json)?;
    write_model(&model, format, &out.join(format!("model.{ext}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Emit {
            input,
            method,
            method_y,
            format,
            out,
        } => emit(&input, method, method_y, format, &out),
        Command::Verify {
            input,
            method,
            method_y,
            checks,
        } => verify(&input, method, method_y, &checks),
        Command::Analyze {
            input,
            method,
            branch,
            table,
        } => analyze(&input, method, branch, table),
        Command::Encode { code, r, d } => encode(code, r, d),
        Command::Gen {
            family,
            segments,
            seed,
            drop,
            out,
            method,
            sources,
            sinks,
            format,
        } => gen(
            family, segments, seed, drop, &out, method, sources, sinks, format,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
