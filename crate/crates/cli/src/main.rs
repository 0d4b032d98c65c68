//! `schubert`: enumerate cosets, multiply Schubert classes, rewrite classes
//! in generators, and compute presentations and Gysin groups.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schubert_core::cohomology::{
    generator_words, gysin_analysis, minimal_generators_up_to, minimal_relations, rewrite_in_generators,
};
use schubert_core::{
    expand_product, CosetTable, EnumerateOptions, Error, LieType, ProductEngine, SchubertClass, SchubertExpansion,
};

mod args;

use args::{parse_class, parse_k};

#[derive(Parser, Debug)]
#[command(name = "schubert", version, about = "Exact Schubert calculus on flag manifolds G/P")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the minimal coset representatives of W/W(P).
    Enumerate(Common),
    /// Expand a product of Schubert classes in the Schubert basis.
    Multiply {
        #[command(flatten)]
        common: Common,
        /// Classes as "w1", a word "3,2,1", or "length.index" such as "4.2".
        #[arg(required = true)]
        classes: Vec<String>,
    },
    /// Write a Schubert class as a polynomial in minimal generators.
    Giambelli {
        #[command(flatten)]
        common: Common,
        class: String,
    },
    /// Minimal generators and relations of the integral cohomology.
    Presentation(Common),
    /// Cohomology of the circle bundle over G/P cut out by w_i.
    Gysin {
        #[command(flatten)]
        common: Common,
        /// Index i of the weight; defaults to the single element of --K.
        #[arg(long)]
        weight: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Lie type such as A3, F4, E6.
    lie: String,
    /// Simple roots NOT in the Levi factor, e.g. "1" or "1,2"; defaults to all (full flag).
    #[arg(long = "K", value_name = "LIST")]
    k: Option<String>,
    /// Length bound: enumeration depth, or the degree through which to compute.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory holding cached coset tables.
    #[arg(long, env = "SCHUBERT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Refuse coset tables larger than this.
    #[arg(long, default_value_t = 1_000_000)]
    max_elements: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Text,
}

/// Failure classes mapped to process exit codes.
#[derive(Debug)]
enum Failure {
    Parse(String),
    Domain(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Domain(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Parse(_) | Error::InvalidLieType(_) => Failure::Parse(m),
            Error::ElementCap { .. } | Error::OrbitCap { .. } => Failure::Resource(m),
            _ => Failure::Domain(m),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let common = match &cli.command {
        Command::Enumerate(c) | Command::Presentation(c) => c,
        Command::Multiply { common, .. } | Command::Giambelli { common, .. } | Command::Gysin { common, .. } => common,
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Domain(e.to_string()))?;
    }
    match &cli.command {
        Command::Enumerate(c) => enumerate(c),
        Command::Multiply { common, classes } => multiply(common, classes),
        Command::Giambelli { common, class } => giambelli(common, class),
        Command::Presentation(c) => presentation(c),
        Command::Gysin { common, weight } => gysin(common, *weight),
    }
}

struct Setup {
    lie: LieType,
    k: Vec<usize>,
}

fn setup(c: &Common) -> Result<Setup, Failure> {
    let lie: LieType = c.lie.parse()?;
    let k = match &c.k {
        Some(s) => parse_k(s, lie.rank())?,
        None => (1..=lie.rank()).collect(),
    };
    Ok(Setup { lie, k })
}

fn load(c: &Common, s: &Setup, max_length: Option<usize>) -> Result<CosetTable, Failure> {
    let opts = EnumerateOptions { cap: c.max_elements, max_length };
    Ok(CosetTable::load_or_build(c.cache_dir.as_deref(), s.lie, &s.k, &opts)?)
}

fn header(s: &Setup) -> Value {
    json!({"type": s.lie.to_string(), "K": s.k})
}

fn enumerate(c: &Common) -> Outcome {
    let s = setup(c)?;
    let table = load(c, &s, c.degree)?;
    Ok(match c.format {
        Format::Json => {
            let elements: Value = serde_json::from_str(&table.export_json()).expect("export is valid JSON");
            let mut v = header(&s);
            v["count"] = json!(table.len());
            v["truncated"] = json!(table.is_truncated());
            v["betti"] = json!(table.betas());
            v["elements"] = elements;
            v.to_string()
        }
        Format::Table => {
            let mut out = String::from("r\ti\tword");
            for g in 0..table.len() {
                let cl = table.class_at(g);
                out.push_str(&format!("\n{}\t{}\t{}", cl.r, cl.i, join(&table.word(cl))));
            }
            out
        }
        Format::Text => format!(
            "{} / P(K={}): {} classes{}, betti {:?}",
            s.lie,
            join(&s.k),
            table.len(),
            if table.is_truncated() { " (truncated)" } else { "" },
            table.betas()
        ),
    })
}

fn expansion_json(table: &CosetTable, e: &SchubertExpansion) -> Value {
    Value::Array(
        e.iter()
            .map(|(cl, v)| json!({"r": cl.r, "i": cl.i, "word": table.word(*cl), "coefficient": v.to_string()}))
            .collect(),
    )
}

fn multiply(c: &Common, args: &[String]) -> Outcome {
    let s = setup(c)?;
    let total_hint = c.degree;
    let table = load(c, &s, total_hint)?;
    let classes: Vec<SchubertClass> = args.iter().map(|a| parse_class(&table, a)).collect::<Result<_, _>>()?;
    let e = expand_product(&table, &classes)?;
    Ok(match c.format {
        Format::Json => {
            let mut v = header(&s);
            v["factors"] = classes.iter().map(|cl| json!({"r": cl.r, "i": cl.i, "word": table.word(*cl)})).collect();
            v["expansion"] = expansion_json(&table, &e);
            v.to_string()
        }
        Format::Table => {
            let mut out = String::from("coefficient\tclass\tword");
            for (cl, v) in e.iter() {
                out.push_str(&format!("\n{v}\t{cl}\t{}", join(&table.word(*cl))));
            }
            out
        }
        Format::Text => e.to_string(),
    })
}

fn giambelli(c: &Common, arg: &str) -> Outcome {
    let s = setup(c)?;
    let table = load(c, &s, c.degree)?;
    let cl = parse_class(&table, arg)?;
    let engine = ProductEngine::new(&table);
    let gens = minimal_generators_up_to(&engine, cl.r)?;
    let mut e = schubert_core::characteristics::FlatExpansion::new();
    e.insert(table.global_index(cl), 1.into());
    let p = rewrite_in_generators(&engine, &gens, cl.r, &e)?;
    let words = generator_words(&table, &gens);
    Ok(match c.format {
        Format::Json => {
            let mut v = header(&s);
            v["class"] = json!({"r": cl.r, "i": cl.i, "word": table.word(cl)});
            v["generators"] = words.iter().map(|(n, w)| json!({"name": n, "word": w})).collect();
            v["polynomial"] = json!(p.to_string());
            v.to_string()
        }
        Format::Table | Format::Text => {
            let mut out = format!("{cl} [{}] = {p}", join(&table.word(cl)));
            for (n, w) in &words {
                out.push_str(&format!("\n  {n} = [{}]", join(w)));
            }
            out
        }
    })
}

fn presentation(c: &Common) -> Outcome {
    let s = setup(c)?;
    let table = load(c, &s, None)?;
    let engine = ProductEngine::new(&table);
    let up_to = c.degree.unwrap_or(table.top() + 1);
    let gens = minimal_generators_up_to(&engine, up_to)?;
    let title = format!("H*({}/P, K={{{}}})", s.lie, join(&s.k));
    let pres = minimal_relations(&engine, &gens, up_to)?.with_title(title);
    let words = generator_words(&table, &gens);
    Ok(match c.format {
        Format::Json => {
            let mut v = pres.to_json();
            v["type"] = json!(s.lie.to_string());
            v["K"] = json!(s.k);
            v["through_length"] = json!(up_to);
            if let Some(gs) = v["generators"].as_array_mut() {
                for (g, (_, w)) in gs.iter_mut().zip(&words) {
                    g["word"] = json!(w);
                }
            }
            v["relation_labels"] = json!(pres.relation_labels());
            v.to_string()
        }
        Format::Table => {
            let mut out = String::from("kind\tname\tdegree\tvalue");
            for (n, w) in &words {
                let d = gens.get(n).map(|g| g.degree).unwrap_or(0);
                out.push_str(&format!("\ngenerator\t{n}\t{d}\t[{}]", join(w)));
            }
            for ((l, r), d) in pres.relation_labels().iter().zip(&pres.relations).zip(pres.relation_degrees()) {
                out.push_str(&format!("\nrelation\t{l}\t{}\t{r}", 2 * d));
            }
            out
        }
        Format::Text => {
            let mut out = pres.to_string().trim_end().to_string();
            for (n, w) in &words {
                out.push_str(&format!("\n  {n} = [{}]", join(w)));
            }
            out
        }
    })
}

fn gysin(c: &Common, weight: Option<usize>) -> Outcome {
    let s = setup(c)?;
    let i = match (weight, s.k.as_slice()) {
        (Some(i), _) => i,
        (None, [i]) => *i,
        _ => return Err(Failure::Domain("--weight is required unless --K has exactly one element".into())),
    };
    if !s.k.contains(&i) {
        return Err(Failure::Domain(format!("weight {i} must belong to K")));
    }
    let table = load(c, &s, None)?;
    let engine = ProductEngine::new(&table);
    let up_to = c.degree.map(|d| d.div_ceil(2)).unwrap_or(table.top() + 1);
    let g = gysin_analysis(&engine, i, up_to)?;
    let nontrivial = g.nontrivial();
    Ok(match c.format {
        Format::Json => {
            let mut v = header(&s);
            v["weight"] = json!(i);
            v["groups"] = nontrivial
                .iter()
                .map(|(d, a)| json!({"degree": d, "group": a.to_string(), "free_rank": a.free_rank,
                    "torsion": a.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()}))
                .collect();
            v.to_string()
        }
        Format::Table | Format::Text => {
            let mut out = String::from("degree\tgroup");
            for (d, a) in &nontrivial {
                out.push_str(&format!("\n{d}\t{a}"));
            }
            out
        }
    })
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
