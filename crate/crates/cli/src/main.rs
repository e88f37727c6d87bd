//! `pcl`: command-line surface over the coset-topology library.
//!
//! Every command prints a single JSON object on stdout (or a plain-text
//! rendering with --text). Errors go to stderr as {"error": code,
//! "message": ...} with exit code 2 for precondition failures and 3 for
//! exceeded bounds.

use clap::{Args, Parser, Subcommand};
use num::rational::BigRational;
use pcl_core::error::Error;
use pcl_core::golomb::{self, GolombSystemSpec, KirchFunction};
use pcl_core::families::{self, APSet, FamilySpec, IntegerSet};
use pcl_core::profinite::{self, ClopenSet};
use pcl_core::ratio::{format_decimal, format_ratio, parse_ratio};
use pcl_core::sieve::Sieve;
use pcl_core::supernatural::{
    self, ArithmeticFn, Exponent, ExponentValue, ExtendedRational, MonotoneResult, Supernatural,
    Tail,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pcl",
    version,
    about = "Coset topologies on Z, Golomb systems, truncated profinite arithmetic and supernatural numbers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Sieve limit for prime-dependent commands.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    prime_limit: u64,
    /// Largest modulus/level accepted by topology commands.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    level_max: u64,
    /// Sieve cache file (bit array with a PCLSIEVE header).
    #[arg(long, global = true, env = "PCL_SIEVE_CACHE")]
    sieve_cache: Option<PathBuf>,
    /// Plain-text output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Add 12-digit decimal renderings next to exact rationals.
    #[arg(long, global = true)]
    decimal: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Named topology families on Z.
    #[command(subcommand)]
    Topo(TopoCmd),
    /// Golomb systems (B, kappa).
    #[command(subcommand)]
    Gsys(GsysCmd),
    /// Truncated profinite arithmetic.
    #[command(subcommand)]
    Zhat(ZhatCmd),
    /// Supernatural numbers.
    #[command(subcommand)]
    Super(SuperCmd),
}

#[derive(Subcommand)]
enum TopoCmd {
    /// Is the coset a + bZ open in the family's topology on Z?
    Open {
        family: String,
        #[arg(allow_negative_numbers = true)]
        a: i64,
        b: u64,
    },
    /// Closure of a set at a finite level.
    Closure {
        family: String,
        /// Comma-separated integers.
        #[arg(long = "set", conflicts_with = "ap", allow_hyphen_values = true)]
        set: Option<String>,
        /// Arithmetic progression "a,b" meaning a + bZ.
        #[arg(long = "ap", allow_hyphen_values = true)]
        ap: Option<String>,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Indiscrete core of the level-n topology.
    Core { family: String, n: u64 },
    /// Brown conditions for the projection from level n*k to level n.
    Brown { family: String, n: u64, k: u64 },
}

#[derive(Args)]
struct GsysCommon {
    /// Golomb system spec file (JSON; may embed a kappa).
    #[arg(long)]
    spec: PathBuf,
    /// Kappa: "inf", an integer, or @file.json (overrides the spec's).
    #[arg(long)]
    kappa: Option<String>,
}

#[derive(Subcommand)]
enum GsysCmd {
    /// Is the coset a + nZ open in the system's topology?
    Open {
        #[command(flatten)]
        common: GsysCommon,
        #[arg(allow_negative_numbers = true)]
        a: i64,
        n: u64,
    },
    /// Least separating prime power for two integers.
    Hausdorff {
        #[command(flatten)]
        common: GsysCommon,
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// The Szczuka dual of the system.
    Dual {
        #[command(flatten)]
        common: GsysCommon,
    },
    /// Superconnected or totally separated, with a witness.
    Classify {
        #[command(flatten)]
        common: GsysCommon,
        #[arg(allow_negative_numbers = true)]
        a: i64,
        n: u64,
    },
}

#[derive(Subcommand)]
enum ZhatCmd {
    /// Residues of primes mod n and the closure-of-primes check.
    Dirichlet { n: u64 },
    /// Exact product of (1 - 1/p) over primes up to the bound.
    Euler { bound: u64 },
    /// Haar measure of a clopen set from a JSON file.
    Measure {
        #[arg(long)]
        clopen: PathBuf,
    },
    /// Golomb's measure of the progression a + bN.
    PiMeasure {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        b: u64,
    },
    /// Empirical prime density in a + bZ up to t.
    Density {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        b: u64,
        t: u64,
    },
}

#[derive(Subcommand)]
enum SuperCmd {
    /// Abundancy index of a supernatural number.
    H { spec: String },
    /// Squarefree supernatural with abundancy within eps of the target.
    Approx {
        target: String,
        #[arg(long)]
        eps: String,
    },
    /// omega and Omega (distinct primes, prime factors with multiplicity).
    Omega { spec: String },
    /// Divisibility-monotonicity of an arithmetic function.
    Monotone {
        /// phi | mu | sigma | identity | power:k
        function: String,
        #[arg(long)]
        bound: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rendered) => {
            println!("{rendered}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("{}", serde_json::json!({ "error": code, "message": err.to_string() }));
            ExitCode::from(code)
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::LevelExceeded { .. }
        | Error::ModulusTooLarge { .. }
        | Error::QuadraticGuard { .. }
        | Error::Overflow
        | Error::EpsUnreachable { .. } => 3,
        _ => 2,
    }
}

/// Typed output: JSON keeps the struct field order, text is one line per field.
trait Render {
    fn text(&self) -> String;
}

fn render<T: Serialize + Render>(cli: &Cli, value: &T) -> Result<String, Error> {
    if cli.text {
        Ok(value.text())
    } else {
        serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.cmd {
        Cmd::Topo(cmd) => run_topo(cli, cmd),
        Cmd::Gsys(cmd) => run_gsys(cli, cmd),
        Cmd::Zhat(cmd) => run_zhat(cli, cmd),
        Cmd::Super(cmd) => run_super(cli, cmd),
    }
}

fn check_level(cli: &Cli, n: u64) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > cli.level_max {
        return Err(Error::LevelExceeded { requested: n, max: cli.level_max });
    }
    Ok(())
}

fn parse_family(s: &str) -> Result<FamilySpec, Error> {
    if let Some(path) = s.strip_prefix('@') {
        let data = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("family file {path}: {e}")))?;
        return serde_json::from_str(&data).map_err(|e| Error::Parse(format!("family json: {e}")));
    }
    match s.to_ascii_lowercase().as_str() {
        "furstenberg" => Ok(FamilySpec::Furstenberg),
        "kp" => Ok(FamilySpec::Kp),
        "golomb" => Ok(FamilySpec::Golomb),
        "kirch" => Ok(FamilySpec::Kirch),
        "rizza" => Ok(FamilySpec::Rizza),
        "szczuka" => Ok(FamilySpec::Szczuka),
        "zd" | "zero-divisor" | "zero_divisor" => Ok(FamilySpec::ZeroDivisor),
        other => match other.strip_prefix("broughan:") {
            Some(m) => {
                let m: u64 = m.parse().map_err(|_| Error::Parse(format!("bad m in {s:?}")))?;
                FamilySpec::broughan_m(m)
            }
            None => Err(Error::Parse(format!(
                "unknown family {s:?} (expected furstenberg|kp|golomb|kirch|rizza|szczuka|zd|broughan:M|@file.json)"
            ))),
        },
    }
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {part:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct OpenOut {
    open: bool,
}

impl Render for OpenOut {
    fn text(&self) -> String {
        format!("open: {}", self.open)
    }
}

#[derive(Serialize)]
struct ClosureOut {
    closure: Vec<u64>,
}

impl Render for ClosureOut {
    fn text(&self) -> String {
        format!("closure: {:?}", self.closure)
    }
}

#[derive(Serialize)]
struct CoreOut {
    core: Vec<u64>,
}

impl Render for CoreOut {
    fn text(&self) -> String {
        format!("core: {:?}", self.core)
    }
}

#[derive(Serialize)]
struct BrownOut {
    #[serde(rename = "B1")]
    b1: bool,
    #[serde(rename = "B2")]
    b2: bool,
    #[serde(rename = "B_n")]
    core_n: Vec<u64>,
    #[serde(rename = "B_nk")]
    core_nk: Vec<u64>,
}

impl Render for BrownOut {
    fn text(&self) -> String {
        format!(
            "B1: {}\nB2: {}\nB_n: {:?}\nB_nk: {:?}",
            self.b1, self.b2, self.core_n, self.core_nk
        )
    }
}

fn run_topo(cli: &Cli, cmd: &TopoCmd) -> Result<String, Error> {
    match cmd {
        TopoCmd::Open { family, a, b } => {
            check_level(cli, *b)?;
            let fam = parse_family(family)?;
            let open = families::coset_open(&fam, *a, *b)?;
            render(cli, &OpenOut { open })
        }
        TopoCmd::Closure { family, set, ap, modulus } => {
            check_level(cli, *modulus)?;
            let fam = parse_family(family)?;
            let input = match (set, ap) {
                (Some(list), None) => IntegerSet::Finite(parse_int_list(list)?),
                (None, Some(pair)) => {
                    let parts = parse_int_list(pair)?;
                    if parts.len() != 2 || parts[1] <= 0 {
                        return Err(Error::Parse("--ap wants \"a,b\" with b >= 1".into()));
                    }
                    IntegerSet::Progression(APSet::new(parts[0], parts[1] as u64))
                }
                _ => return Err(Error::Parse("exactly one of --set or --ap is required".into())),
            };
            let closure = families::closure_mod(&fam, &input, *modulus)?.to_vec();
            render(cli, &ClosureOut { closure })
        }
        TopoCmd::Core { family, n } => {
            check_level(cli, *n)?;
            let fam = parse_family(family)?;
            let core = families::topology_at(&fam, *n)?.indiscrete_core().to_vec();
            render(cli, &CoreOut { core })
        }
        TopoCmd::Brown { family, n, k } => {
            let nk = n.checked_mul(*k).ok_or(Error::Overflow)?;
            check_level(cli, nk.max(*n))?;
            let fam = parse_family(family)?;
            let bc = families::brown_conditions(&fam, *n, *k)?;
            render(
                cli,
                &BrownOut {
                    b1: bc.b1,
                    b2: bc.b2,
                    core_n: bc.core_n.to_vec(),
                    core_nk: bc.core_nk.to_vec(),
                },
            )
        }
    }
}

fn load_system(common: &GsysCommon) -> Result<(GolombSystemSpec, KirchFunction), Error> {
    let data = std::fs::read_to_string(&common.spec)
        .map_err(|e| Error::Parse(format!("spec file {}: {e}", common.spec.display())))?;
    let (spec, embedded) = golomb::parse_spec_with_kappa(&data)?;
    let kappa = match &common.kappa {
        None => embedded.unwrap_or_else(KirchFunction::golomb),
        Some(text) => parse_kappa(text)?,
    };
    kappa.validate(&spec)?;
    Ok((spec, kappa))
}

fn parse_kappa(s: &str) -> Result<KirchFunction, Error> {
    if let Some(path) = s.strip_prefix('@') {
        let data = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("kappa file {path}: {e}")))?;
        return serde_json::from_str(&data).map_err(|e| Error::Parse(format!("kappa json: {e}")));
    }
    if s == "inf" {
        return Ok(KirchFunction::golomb());
    }
    let k: u32 = s.parse().map_err(|_| {
        Error::Parse(format!("kappa must be \"inf\", an integer or @file, got {s:?}"))
    })?;
    Ok(KirchFunction::constant(k))
}

#[derive(Serialize)]
struct HausdorffOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    none_below: Option<u64>,
}

impl Render for HausdorffOut {
    fn text(&self) -> String {
        match (self.p, self.r) {
            (Some(p), Some(r)) => format!("witness: p = {p}, r = {r}"),
            _ => format!("none <= {}", self.none_below.unwrap_or(0)),
        }
    }
}

struct DualOut(GolombSystemSpec);

impl Serialize for DualOut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Render for DualOut {
    fn text(&self) -> String {
        serde_json::to_string(&self.0).unwrap_or_default()
    }
}

struct ClassOut(golomb::CosetClass);

impl Serialize for ClassOut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Render for ClassOut {
    fn text(&self) -> String {
        match &self.0 {
            golomb::CosetClass::Superconnected { modulus, residue } => {
                format!("superconnected ({residue} mod {modulus} lies in the core)")
            }
            golomb::CosetClass::TotallySeparated { prime, exponent } => {
                format!("totally separated (splitting prime {prime}^{exponent})")
            }
        }
    }
}

fn run_gsys(cli: &Cli, cmd: &GsysCmd) -> Result<String, Error> {
    match cmd {
        GsysCmd::Open { common, a, n } => {
            check_level(cli, *n)?;
            let (spec, kappa) = load_system(common)?;
            let open = golomb::coset_open(&spec, &kappa, *a, *n)?;
            render(cli, &OpenOut { open })
        }
        GsysCmd::Hausdorff { common, a, b, bound } => {
            let (spec, kappa) = load_system(common)?;
            let out = match golomb::hausdorff_witness(&spec, &kappa, *a, *b, *bound)? {
                Some((p, r)) => HausdorffOut { p: Some(p), r: Some(r), none_below: None },
                None => HausdorffOut { p: None, r: None, none_below: Some(*bound) },
            };
            render(cli, &out)
        }
        GsysCmd::Dual { common } => {
            let (spec, _) = load_system(common)?;
            render(cli, &DualOut(golomb::dual(&spec)?))
        }
        GsysCmd::Classify { common, a, n } => {
            check_level(cli, *n)?;
            let (spec, _) = load_system(common)?;
            render(cli, &ClassOut(golomb::classify_coset(&spec, *a, *n)?))
        }
    }
}

#[derive(Serialize)]
struct ValueOut {
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<String>,
}

impl ValueOut {
    fn rational(cli: &Cli, r: &BigRational) -> ValueOut {
        ValueOut { value: format_ratio(r), decimal: cli.decimal.then(|| format_decimal(r, 12)) }
    }
}

impl Render for ValueOut {
    fn text(&self) -> String {
        match &self.decimal {
            Some(d) => format!("value: {} ({d})", self.value),
            None => format!("value: {}", self.value),
        }
    }
}

#[derive(Serialize)]
struct DirichletOut {
    residues: Vec<u64>,
    check: bool,
}

impl Render for DirichletOut {
    fn text(&self) -> String {
        format!("residues: {:?}\ncheck: {}", self.residues, self.check)
    }
}

#[derive(Serialize)]
struct DensityOut {
    absolute: String,
    relative: String,
    count: u64,
    primes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    absolute_decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_decimal: Option<String>,
}

impl Render for DensityOut {
    fn text(&self) -> String {
        format!(
            "absolute: {}\nrelative: {}\ncount: {}\nprimes: {}",
            self.absolute, self.relative, self.count, self.primes
        )
    }
}

fn load_sieve(cli: &Cli, limit: u64) -> Result<Sieve, Error> {
    Sieve::load_or_build(limit, cli.sieve_cache.as_deref())
}

fn run_zhat(cli: &Cli, cmd: &ZhatCmd) -> Result<String, Error> {
    match cmd {
        ZhatCmd::Dirichlet { n } => {
            check_level(cli, *n)?;
            let sieve = load_sieve(cli, cli.prime_limit.max(*n))?;
            let shadow = profinite::dirichlet_check(*n, &sieve)?;
            render(cli, &DirichletOut { residues: shadow.residues, check: shadow.check })
        }
        ZhatCmd::Euler { bound } => {
            let value = profinite::euler_unit_measure(*bound)?;
            render(cli, &ValueOut::rational(cli, &value))
        }
        ZhatCmd::Measure { clopen } => {
            let data = std::fs::read_to_string(clopen)
                .map_err(|e| Error::Parse(format!("clopen file {}: {e}", clopen.display())))?;
            let set: ClopenSet = serde_json::from_str(&data)
                .map_err(|e| Error::Parse(format!("clopen json: {e}")))?;
            render(cli, &ValueOut::rational(cli, &set.haar_measure()))
        }
        ZhatCmd::PiMeasure { a, b } => {
            let value = profinite::golomb_pi_measure(*a, *b)?;
            render(cli, &ValueOut::rational(cli, &value))
        }
        ZhatCmd::Density { a, b, t } => {
            let sieve = load_sieve(cli, cli.prime_limit.max(*t))?;
            let d = profinite::empirical_prime_density(*a, *b, *t, &sieve)?;
            render(
                cli,
                &DensityOut {
                    absolute: format_ratio(&d.absolute),
                    relative: format_ratio(&d.relative),
                    count: d.count_in_class,
                    primes: d.count_primes,
                    absolute_decimal: cli.decimal.then(|| format_decimal(&d.absolute, 12)),
                    relative_decimal: cli.decimal.then(|| format_decimal(&d.relative, 12)),
                },
            )
        }
    }
}

fn parse_supernatural(s: &str) -> Result<Supernatural, Error> {
    if let Some(path) = s.strip_prefix('@') {
        let data = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("supernatural file {path}: {e}")))?;
        return serde_json::from_str(&data)
            .map_err(|e| Error::Parse(format!("supernatural json: {e}")));
    }
    if s == "0" {
        return Ok(Supernatural::from_zero());
    }
    if s.chars().all(|c| c.is_ascii_digit()) {
        let n: u64 = s.parse().map_err(|_| Error::Parse(format!("bad natural {s:?}")))?;
        return Supernatural::from_natural(n);
    }
    // factored form: p^e*p^e*..., exponents integers or "inf"
    let mut entries = Vec::new();
    for part in s.split('*') {
        let (p_text, e_text) = match part.split_once('^') {
            Some((p, e)) => (p, e),
            None => (part, "1"),
        };
        let p: u64 = p_text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime {p_text:?}")))?;
        let e = match e_text.trim() {
            "inf" => Exponent::Infinite,
            digits => Exponent::Finite(
                digits.parse().map_err(|_| Error::Parse(format!("bad exponent {digits:?}")))?,
            ),
        };
        entries.push((p, e));
    }
    Supernatural::from_parts(entries, Tail::Zero)
}

#[derive(Serialize)]
struct HOut {
    h: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<String>,
}

impl Render for HOut {
    fn text(&self) -> String {
        format!("h: {}", self.h)
    }
}

#[derive(Serialize)]
struct ApproxOut {
    s: String,
    h: String,
}

impl Render for ApproxOut {
    fn text(&self) -> String {
        format!("s: {}\nh: {}", self.s, self.h)
    }
}

#[derive(Serialize)]
struct OmegaOut {
    omega: serde_json::Value,
    big_omega: serde_json::Value,
}

impl Render for OmegaOut {
    fn text(&self) -> String {
        format!("omega: {}\nbig_omega: {}", self.omega, self.big_omega)
    }
}

#[derive(Serialize)]
struct MonotoneOut {
    monotone: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<u64>,
}

impl Render for MonotoneOut {
    fn text(&self) -> String {
        match (self.a, self.b) {
            (Some(a), Some(b)) => format!("monotone: false (counterexample a = {a}, b = {b})"),
            _ => "monotone: true".into(),
        }
    }
}

fn exponent_value_json(v: ExponentValue) -> serde_json::Value {
    match v {
        ExponentValue::Finite(k) => serde_json::Value::from(k),
        ExponentValue::Infinite => serde_json::Value::from("inf"),
    }
}

fn run_super(cli: &Cli, cmd: &SuperCmd) -> Result<String, Error> {
    match cmd {
        SuperCmd::H { spec } => {
            let s = parse_supernatural(spec)?;
            let out = match s.abundancy() {
                ExtendedRational::Finite(r) => HOut {
                    h: format_ratio(&r),
                    decimal: cli.decimal.then(|| format_decimal(&r, 12)),
                },
                ExtendedRational::Infinite => HOut { h: "inf".into(), decimal: None },
            };
            render(cli, &out)
        }
        SuperCmd::Approx { target, eps } => {
            let t = parse_ratio(target)?;
            let eps = parse_ratio(eps)?;
            let s = supernatural::approx_target(&t, &eps, cli.prime_limit)?;
            let value = s
                .squarefree_value()
                .ok_or_else(|| Error::InternalConsistency("approx output is squarefree".into()))?;
            let h = match s.abundancy() {
                ExtendedRational::Finite(r) => format_ratio(&r),
                ExtendedRational::Infinite => "inf".into(),
            };
            render(cli, &ApproxOut { s: value.to_string(), h })
        }
        SuperCmd::Omega { spec } => {
            let s = parse_supernatural(spec)?;
            render(
                cli,
                &OmegaOut {
                    omega: exponent_value_json(s.omega()),
                    big_omega: exponent_value_json(s.big_omega()),
                },
            )
        }
        SuperCmd::Monotone { function, bound } => {
            let f = match function.to_ascii_lowercase().as_str() {
                "phi" => ArithmeticFn::Phi,
                "mu" => ArithmeticFn::Mu,
                "sigma" => ArithmeticFn::Sigma,
                "identity" => ArithmeticFn::Identity,
                other => match other.strip_prefix("power:") {
                    Some(k) => ArithmeticFn::Power(
                        k.parse().map_err(|_| Error::Parse(format!("bad power {k:?}")))?,
                    ),
                    None => {
                        return Err(Error::Parse(format!(
                            "unknown function {function:?} (expected phi|mu|sigma|identity|power:k)"
                        )))
                    }
                },
            };
            let out = match supernatural::divisibility_monotone(&f, *bound)? {
                MonotoneResult::Monotone => MonotoneOut { monotone: true, a: None, b: None },
                MonotoneResult::Counterexample { a, b } => {
                    MonotoneOut { monotone: false, a: Some(a), b: Some(b) }
                }
            };
            render(cli, &out)
        }
    }
}
