//! Sectioned `key = value` run configuration.
//!
//! ```text
//! [model]
//! kind = euler
//! gamma = 1.4
//!
//! [mesh]
//! preset = channel
//! n = 100
//!
//! [scheme]
//! reconstruction = upwind
//! flux = roe
//!
//! [boundary]
//! default = slip_wall
//! xmin = transmissive
//! xmax = transmissive
//!
//! [initial]
//! preset = sod
//!
//! [time]
//! t_end = 0.2
//! ```
//!
//! `#` starts a comment. Keys are unique per section except the list keys
//! `periodic`, `region`, `probe` and `radial_probe`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use vcfv_core::case::{blast_domain, channel_domain, sod, test2, BlastSpec, Region};
use vcfv_core::*;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line of the offending entry, if there is one.
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError { line: Some(line), message: message.into() }
    }
    fn general(message: impl Into<String>) -> Self {
        ConfigError { line: None, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A parsed configuration: the run itself plus the cli-only settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub run: RunConfig,
    /// Applied to every boundary tag without an explicit entry.
    pub default_boundary: Option<BoundaryCondition>,
    /// Cell fields written to snapshots and probes (all when empty).
    pub fields: Vec<String>,
}

pub const EULER_FIELDS: [&str; 4] = ["density", "velocity", "pressure", "energy"];
pub const SCALAR_FIELDS: [&str; 1] = ["u"];

const LIST_KEYS: [&str; 4] = ["periodic", "region", "probe", "radial_probe"];

const SECTIONS: [(&str, &[&str]); 7] = [
    ("model", &["kind", "gamma", "velocity", "direction"]),
    ("mesh", &["gmsh", "preset", "n", "dim", "extents", "cells", "origin", "split", "perturb", "seed", "periodic"]),
    (
        "scheme",
        &["interpolation", "reconstruction", "limited", "jameson_q", "jameson_eps", "flux", "monitor_max_principle"],
    ),
    ("boundary", &[]),
    (
        "initial",
        &[
            "preset", "left", "right", "axis", "position", "profile", "mean", "amplitude", "wave", "normal", "lo", "hi",
            "inside", "outside", "center", "width", "background", "value", "gradient", "state", "default", "region",
            "radius", "density", "core_temperature", "ambient_temperature", "gas_constant",
        ],
    ),
    ("time", &["cfl", "t_end", "dt", "integrator", "max_steps"]),
    ("output", &["directory", "snapshot_interval", "fields", "probe", "radial_probe"]),
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug, Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, Vec<Entry>>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key).and_then(|v| v.first())
    }

    fn all(&self, key: &str) -> &[Entry] {
        self.entries.get(key).map_or(&[], |v| v.as_slice())
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.get(key).map(|e| parse_value(e, key)).transpose()
    }

    fn numbers(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(key).map(numbers).transpose()
    }

    fn vec3(&self, key: &str) -> Result<Option<Vec3>, ConfigError> {
        self.get(key).map(vec3).transpose()
    }

    fn require<T>(&self, name: &str, key: &str, v: Option<T>) -> Result<T, ConfigError> {
        v.ok_or_else(|| ConfigError::at(self.line, format!("[{name}] needs '{key}'")))
    }
}

fn parse_value<T: FromStr>(e: &Entry, key: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    e.value.parse::<T>().map_err(|err| ConfigError::at(e.line, format!("invalid value '{}' for '{key}': {err}", e.value)))
}

fn numbers(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    e.value
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| ConfigError::at(e.line, format!("'{s}' is not a number"))))
        .collect()
}

fn vec3(e: &Entry) -> Result<Vec3, ConfigError> {
    let v = numbers(e)?;
    if v.is_empty() || v.len() > 3 {
        return Err(ConfigError::at(e.line, format!("expected 1 to 3 components, got {}", v.len())));
    }
    Ok(Vec3::from_slice(&v))
}

fn parse_bool(e: &Entry, key: &str) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        v => Err(ConfigError::at(e.line, format!("invalid value '{v}' for '{key}' (expected true or false)"))),
    }
}

fn tokenize(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line, format!("malformed section header '{content}'")))?
                .trim()
                .to_string();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                let known: Vec<&str> = SECTIONS.iter().map(|(s, _)| *s).collect();
                return Err(ConfigError::at(line, format!("unknown section [{name}] (expected {})", known.join(", "))));
            }
            if sections.contains_key(&name) {
                return Err(ConfigError::at(line, format!("section [{name}] appears twice")));
            }
            sections.insert(name.clone(), Section { line, entries: BTreeMap::new() });
            current = Some(name);
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::at(line, format!("expected 'key = value', got '{content}'")));
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        let Some(sec_name) = &current else {
            return Err(ConfigError::at(line, format!("key '{key}' is outside any section")));
        };
        if key.is_empty() {
            return Err(ConfigError::at(line, "empty key"));
        }
        let allowed = SECTIONS.iter().find(|(s, _)| s == sec_name).map(|(_, k)| *k).unwrap_or(&[]);
        if sec_name != "boundary" && !allowed.contains(&key.as_str()) {
            return Err(ConfigError::at(line, format!("unknown key '{key}' in [{sec_name}]")));
        }
        let sec = sections.get_mut(sec_name).expect("section exists");
        let slot = sec.entries.entry(key.clone()).or_default();
        if !slot.is_empty() && !LIST_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::at(line, format!("duplicate key '{key}' in [{sec_name}] (first on line {})", slot[0].line)));
        }
        slot.push(Entry { value, line });
    }
    Ok(sections)
}

/// Reads and parses a configuration file. Relative mesh and output paths
/// are taken relative to the file's directory.
pub fn load_config(path: impl AsRef<Path>) -> Result<CaseConfig, crate::CliError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| crate::CliError::Io { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base).map_err(|source| crate::CliError::Config { path: path.to_path_buf(), source })
}

/// Parses configuration text. `base` resolves relative paths.
pub fn parse_config(text: &str, base: &Path) -> Result<CaseConfig, ConfigError> {
    let sections = tokenize(text)?;
    let empty = Section::default();
    let sec = |name: &str| sections.get(name).unwrap_or(&empty);

    let model = parse_model(sec("model"))?;
    let mesh = parse_mesh(sections.get("mesh"), base)?;
    let (scheme, default_boundary) = parse_scheme(sec("scheme"), sec("boundary"), model)?;
    let initial = parse_initial(sec("initial"), &model)?;
    let time = parse_time(sec("time"))?;
    let (output, fields) = parse_output(sec("output"), &model, base)?;

    let seed = match &mesh.source {
        MeshSource::Box(b) => b.seed,
        MeshSource::Gmsh(_) => 0,
    };
    let run = RunConfig { mesh, scheme: SchemeConfig { time, ..scheme }, initial, output, seed };
    Ok(CaseConfig { run, default_boundary, fields })
}

fn parse_model(s: &Section) -> Result<Model, ConfigError> {
    let kind = s.get("kind").map_or("euler", |e| e.value.as_str());
    let line = s.get("kind").map_or(s.line, |e| e.line);
    match kind {
        "euler" => {
            let gamma = s.parse::<f64>("gamma")?.unwrap_or(1.4);
            let gas = GasModel::new(gamma).map_err(|e| ConfigError::at(s.get("gamma").map_or(line, |e| e.line), e.to_string()))?;
            Ok(Model::Euler(gas))
        }
        "advection" => {
            let velocity = s.require("model", "velocity", s.vec3("velocity")?)?;
            Ok(Model::Scalar(ScalarModel::Advection { velocity }))
        }
        "burgers" => {
            let direction = s.vec3("direction")?.unwrap_or(Vec3::new(1.0, 0.0, 0.0));
            Ok(Model::Scalar(ScalarModel::Burgers { direction }))
        }
        other => Err(ConfigError::at(line, format!("unknown model '{other}' (expected euler, advection, burgers)"))),
    }
}

fn parse_mesh(s: Option<&Section>, base: &Path) -> Result<MeshSpec, ConfigError> {
    let s = s.ok_or_else(|| ConfigError::general("missing [mesh] section"))?;
    let sources: Vec<&str> = ["gmsh", "preset", "cells"].into_iter().filter(|k| s.get(k).is_some()).collect();
    let mut spec = match sources.as_slice() {
        ["gmsh"] => {
            let p = PathBuf::from(&s.get("gmsh").expect("checked").value);
            MeshSpec::gmsh(if p.is_relative() { base.join(p) } else { p })
        }
        ["preset"] => {
            let e = s.get("preset").expect("checked");
            let n = s.parse::<usize>("n")?;
            let b = match e.value.as_str() {
                "channel" => channel_domain(n.unwrap_or(100)),
                "blast" => blast_domain(n.unwrap_or(24)),
                other => return Err(ConfigError::at(e.line, format!("unknown mesh preset '{other}' (expected channel, blast)"))),
            };
            MeshSpec::boxed(apply_box_options(s, b)?)
        }
        ["cells"] => {
            let cells: Vec<usize> = numbers(s.get("cells").expect("checked"))?.iter().map(|&c| c as usize).collect();
            let e = s.get("cells").expect("checked");
            let dim = s.parse::<usize>("dim")?.unwrap_or(cells.len());
            if !(2..=3).contains(&dim) || cells.len() != dim || cells.iter().any(|&c| c == 0) {
                return Err(ConfigError::at(e.line, format!("need {dim} positive cell counts for a {dim}-D box")));
            }
            let extents = s.numbers("extents")?.unwrap_or_else(|| vec![1.0; dim]);
            if extents.len() != dim || extents.iter().any(|&x| !(x > 0.0)) {
                return Err(ConfigError::at(s.get("extents").map_or(e.line, |e| e.line), format!("need {dim} positive extents")));
            }
            MeshSpec::boxed(apply_box_options(s, BoxSpec::new(dim, &extents, &cells))?)
        }
        [] => return Err(ConfigError::at(s.line, "[mesh] needs one of 'gmsh', 'preset' or 'cells'")),
        _ => return Err(ConfigError::at(s.line, format!("[mesh] sets several mesh sources: {}", sources.join(", ")))),
    };
    for e in s.all("periodic") {
        for pair in e.value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| ConfigError::at(e.line, format!("periodic pair '{pair}' should read 'from:to'")))?;
            spec.periodic.push((a.trim().to_string(), b.trim().to_string()));
        }
    }
    Ok(spec)
}

fn apply_box_options(s: &Section, mut b: BoxSpec) -> Result<BoxSpec, ConfigError> {
    if let Some(o) = s.vec3("origin")? {
        b.origin = o;
    }
    if let Some(split) = s.parse::<Diagonal>("split")? {
        b.split = split;
    }
    if let Some(p) = s.parse::<f64>("perturb")? {
        if !(0.0..0.5).contains(&p) {
            return Err(ConfigError::at(s.get("perturb").expect("parsed").line, "perturb must lie in [0, 0.5)"));
        }
        b.perturb = p;
    }
    if let Some(seed) = s.parse::<u64>("seed")? {
        b.seed = seed;
    }
    Ok(b)
}

fn parse_scheme(
    s: &Section,
    bsec: &Section,
    model: Model,
) -> Result<(SchemeConfig, Option<BoundaryCondition>), ConfigError> {
    let interp = s.parse::<InterpScheme>("interpolation")?.unwrap_or(InterpScheme::ConsistentShepard);
    let recon_scheme = s.parse::<ReconScheme>("reconstruction")?.unwrap_or(ReconScheme::Upwind);
    let limited = s.get("limited").map(|e| parse_bool(e, "limited")).transpose()?.unwrap_or(true);
    let mut recon = ReconConfig::new(recon_scheme, limited, 3);
    if let Some(q) = s.parse::<f64>("jameson_q")? {
        recon.jameson_q = q;
    }
    if let Some(eps) = s.parse::<f64>("jameson_eps")? {
        recon.jameson_eps = eps;
    }
    let flux = match (s.parse::<FluxScheme>("flux")?, model) {
        (Some(f), Model::Euler(_)) if !f.is_euler() => {
            return Err(ConfigError::at(s.get("flux").expect("parsed").line, format!("flux '{f}' does not fit the euler model (expected roe, kfvs)")))
        }
        (Some(f), Model::Scalar(_)) if f.is_euler() => {
            return Err(ConfigError::at(
                s.get("flux").expect("parsed").line,
                format!("flux '{f}' needs the euler model (expected upwind, godunov, engquist-osher)"),
            ))
        }
        (Some(f), _) => f,
        (None, Model::Euler(_)) => {
            return Err(ConfigError::at(s.line, "the euler model needs a 'flux' in [scheme] (expected roe, kfvs)"))
        }
        (None, Model::Scalar(ScalarModel::Advection { .. })) => FluxScheme::Upwind,
        (None, Model::Scalar(ScalarModel::Burgers { .. })) => FluxScheme::Godunov,
    };
    let monitor = s.get("monitor_max_principle").map(|e| parse_bool(e, "monitor_max_principle")).transpose()?.unwrap_or(false);

    let nvar = model.nvar();
    let mut boundary = Vec::new();
    let mut default = None;
    for (tag, entries) in &bsec.entries {
        let e = &entries[0];
        let mut words = e.value.split_whitespace();
        let kind_str = words.next().ok_or_else(|| ConfigError::at(e.line, format!("boundary '{tag}' has no kind")))?;
        let kind: BcKind = kind_str.parse().map_err(|m: String| ConfigError::at(e.line, m))?;
        let data: Vec<f64> = words
            .map(|w| w.trim_matches(',').parse::<f64>().map_err(|_| ConfigError::at(e.line, format!("'{w}' is not a number"))))
            .collect::<Result<_, _>>()?;
        let needs = match kind {
            BcKind::SupersonicInflow | BcKind::DirichletScalar => nvar,
            _ => 0,
        };
        if data.len() != needs {
            return Err(ConfigError::at(e.line, format!("boundary '{tag}' ({kind}) takes {needs} value(s), got {}", data.len())));
        }
        let bc = BoundaryCondition::new(tag, kind).with_data(data);
        if tag == "default" {
            if kind == BcKind::Periodic {
                return Err(ConfigError::at(e.line, "the default boundary cannot be periodic"));
            }
            default = Some(bc);
        } else {
            boundary.push(bc);
        }
    }
    let scheme = SchemeConfig {
        model,
        interp,
        recon,
        flux,
        boundary,
        time: TimeControls::default(),
        monitor_max_principle: monitor,
    };
    Ok((scheme, default))
}

fn parse_initial(s: &Section, model: &Model) -> Result<InitialCondition, ConfigError> {
    let euler = model.is_euler();
    let kind_line = s.get("preset").or(s.get("profile")).map_or(s.line, |e| e.line);
    let ic = if let Some(e) = s.get("preset") {
        match e.value.as_str() {
            "sod" => sod(),
            "test2" => test2(),
            "blast" => {
                let d = BlastSpec::default();
                InitialCondition::Blast(BlastSpec {
                    center: s.vec3("center")?.unwrap_or(d.center),
                    radius: s.parse("radius")?.unwrap_or(d.radius),
                    density: s.parse("density")?.unwrap_or(d.density),
                    core_temperature: s.parse("core_temperature")?.unwrap_or(d.core_temperature),
                    ambient_temperature: s.parse("ambient_temperature")?.unwrap_or(d.ambient_temperature),
                    gas_constant: s.parse("gas_constant")?.unwrap_or(d.gas_constant),
                })
            }
            "advected_profile" => InitialCondition::Scalar(Profile::Sine {
                mean: s.parse("mean")?.unwrap_or(1.0),
                amplitude: s.parse("amplitude")?.unwrap_or(0.5),
                wave: s.vec3("wave")?.unwrap_or(Vec3::new(1.0, 1.0, 0.0)),
            }),
            "shock_tube" => {
                let state = |key: &str| -> Result<EulerPrimitive, ConfigError> {
                    let e = s.get(key).ok_or_else(|| ConfigError::at(s.line, format!("shock_tube needs '{key}' = rho u p")))?;
                    match numbers(e)?.as_slice() {
                        [r, u, p] => Ok(EulerPrimitive::new(*r, Vec3::new(*u, 0.0, 0.0), *p)),
                        [r, u, v, w, p] => Ok(EulerPrimitive::new(*r, Vec3::new(*u, *v, *w), *p)),
                        _ => Err(ConfigError::at(e.line, format!("'{key}' needs rho u p or rho u v w p"))),
                    }
                };
                let axis = s.parse::<usize>("axis")?.unwrap_or(0);
                if axis > 2 {
                    return Err(ConfigError::at(s.get("axis").expect("parsed").line, "axis must be 0, 1 or 2"));
                }
                InitialCondition::ShockTube {
                    left: state("left")?,
                    right: state("right")?,
                    axis,
                    position: s.parse("position")?.unwrap_or(0.5),
                }
            }
            "uniform" => {
                let e = s.get("state").ok_or_else(|| ConfigError::at(s.line, "uniform initial condition needs 'state'"))?;
                InitialCondition::Uniform(numbers(e)?)
            }
            "piecewise" => {
                let e = s.get("default").ok_or_else(|| ConfigError::at(s.line, "piecewise initial condition needs 'default'"))?;
                let regions = s.all("region").iter().map(parse_region).collect::<Result<_, _>>()?;
                InitialCondition::Piecewise { default: numbers(e)?, regions }
            }
            other => {
                return Err(ConfigError::at(
                    e.line,
                    format!("unknown initial preset '{other}' (expected sod, test2, blast, advected_profile, shock_tube, uniform, piecewise)"),
                ))
            }
        }
    } else if let Some(e) = s.get("profile") {
        let need = |key: &str| -> Result<f64, ConfigError> {
            s.parse::<f64>(key)?.ok_or_else(|| ConfigError::at(e.line, format!("profile '{}' needs '{key}'", e.value)))
        };
        let need3 = |key: &str| -> Result<Vec3, ConfigError> {
            s.vec3(key)?.ok_or_else(|| ConfigError::at(e.line, format!("profile '{}' needs '{key}'", e.value)))
        };
        InitialCondition::Scalar(match e.value.as_str() {
            "sine" => Profile::Sine { mean: need("mean")?, amplitude: need("amplitude")?, wave: need3("wave")? },
            "band" => Profile::Band {
                normal: need3("normal")?,
                lo: need("lo")?,
                hi: need("hi")?,
                inside: need("inside")?,
                outside: need("outside")?,
            },
            "gaussian" => Profile::Gaussian {
                center: need3("center")?,
                width: need("width")?,
                amplitude: need("amplitude")?,
                background: need("background")?,
            },
            "linear" => Profile::Linear { c: need("value")?, g: need3("gradient")? },
            other => {
                return Err(ConfigError::at(e.line, format!("unknown profile '{other}' (expected sine, band, gaussian, linear)")))
            }
        })
    } else {
        return Err(ConfigError::at(s.line, "missing initial condition: set 'preset' or 'profile' in [initial]"));
    };
    if ic.is_euler() != Some(euler) {
        let want = if euler { "an euler" } else { "a scalar" };
        return Err(ConfigError::at(kind_line, format!("initial condition does not fit the model (need {want} state)")));
    }
    let nvar = model.nvar();
    let bad_len = match &ic {
        InitialCondition::Uniform(v) => v.len() != nvar,
        InitialCondition::Piecewise { default, regions } => {
            default.len() != nvar || regions.iter().any(|(_, v)| v.len() != nvar)
        }
        _ => false,
    };
    if bad_len {
        return Err(ConfigError::at(kind_line, format!("initial states need {nvar} component(s)")));
    }
    Ok(ic)
}

/// `halfspace nx ny nz offset : values` or `ball cx cy cz r : values`.
fn parse_region(e: &Entry) -> Result<(Region, Vec<f64>), ConfigError> {
    let (shape, values) =
        e.value.split_once(':').ok_or_else(|| ConfigError::at(e.line, "region should read '<shape> <params> : <state>'"))?;
    let mut words = shape.split_whitespace();
    let kind = words.next().unwrap_or("");
    let params = Entry { value: words.collect::<Vec<_>>().join(" "), line: e.line };
    let p = numbers(&params)?;
    let region = match (kind, p.as_slice()) {
        ("halfspace", [x, y, z, off]) => Region::HalfSpace { normal: Vec3::new(*x, *y, *z), offset: *off },
        ("ball", [x, y, z, r]) => Region::Ball { center: Vec3::new(*x, *y, *z), radius: *r },
        _ => return Err(ConfigError::at(e.line, "region shape must be 'halfspace nx ny nz offset' or 'ball cx cy cz r'")),
    };
    Ok((region, numbers(&Entry { value: values.to_string(), line: e.line })?))
}

fn parse_time(s: &Section) -> Result<TimeControls, ConfigError> {
    let d = TimeControls::default();
    let t = TimeControls {
        cfl: s.parse("cfl")?.unwrap_or(d.cfl),
        t_end: s.parse("t_end")?.unwrap_or(d.t_end),
        fixed_dt: s.parse("dt")?,
        integrator: s.parse("integrator")?.unwrap_or(d.integrator),
        max_steps: s.parse("max_steps")?.unwrap_or(d.max_steps),
    };
    let line = |k: &str| s.get(k).map_or(s.line, |e| e.line);
    if !(t.cfl > 0.0) {
        return Err(ConfigError::at(line("cfl"), "cfl must be positive"));
    }
    if !(t.t_end >= 0.0) || !t.t_end.is_finite() {
        return Err(ConfigError::at(line("t_end"), "t_end must be finite and non-negative"));
    }
    if t.fixed_dt.is_some_and(|dt| !(dt > 0.0)) {
        return Err(ConfigError::at(line("dt"), "dt must be positive"));
    }
    Ok(t)
}

fn parse_output(s: &Section, model: &Model, base: &Path) -> Result<(OutputSpec, Vec<String>), ConfigError> {
    let directory = s.get("directory").map(|e| {
        let p = PathBuf::from(&e.value);
        if p.is_relative() {
            base.join(p)
        } else {
            p
        }
    });
    let snapshot_interval = s.parse("snapshot_interval")?.unwrap_or(0);
    let allowed: &[&str] = if model.is_euler() { &EULER_FIELDS } else { &SCALAR_FIELDS };
    let mut fields = Vec::new();
    if let Some(e) = s.get("fields") {
        for name in e.value.split(',').map(str::trim) {
            if name.is_empty() {
                return Err(ConfigError::at(e.line, "empty field name in 'fields'"));
            }
            if !allowed.contains(&name) {
                return Err(ConfigError::at(e.line, format!("unknown field '{name}' (expected {})", allowed.join(", "))));
            }
            fields.push(name.to_string());
        }
    }
    let probes = |key: &str| s.all(key).iter().map(parse_probe).collect::<Result<Vec<_>, _>>();
    let out = OutputSpec { directory, snapshot_interval, line_probes: probes("probe")?, radial_probes: probes("radial_probe")? };
    let mut names: Vec<&str> = out.line_probes.iter().chain(&out.radial_probes).map(|p| p.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(ConfigError::at(s.line, format!("probe name '{}' is used twice", w[0])));
    }
    Ok((out, fields))
}

/// `name sx sy sz dx dy dz samples`
fn parse_probe(e: &Entry) -> Result<LineProbe, ConfigError> {
    let mut words = e.value.split_whitespace();
    let name = words.next().unwrap_or("");
    if name.is_empty() || name.parse::<f64>().is_ok() {
        return Err(ConfigError::at(e.line, "probe should read 'name sx sy sz dx dy dz samples'"));
    }
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(ConfigError::at(e.line, format!("probe name '{name}' may only use letters, digits, '_' and '-'")));
    }
    let v = numbers(&Entry { value: words.collect::<Vec<_>>().join(" "), line: e.line })?;
    let [sx, sy, sz, dx, dy, dz, n] = v.as_slice() else {
        return Err(ConfigError::at(e.line, "probe should read 'name sx sy sz dx dy dz samples'"));
    };
    if !(*n >= 1.0) || n.fract() != 0.0 {
        return Err(ConfigError::at(e.line, "probe sample count must be a positive integer"));
    }
    Ok(LineProbe {
        name: name.to_string(),
        start: Vec3::new(*sx, *sy, *sz),
        direction: Vec3::new(*dx, *dy, *dz),
        samples: *n as usize,
    })
}

impl CaseConfig {
    /// Scheme settings with the default boundary filled in for every tag of
    /// `mesh` that has no explicit entry.
    pub fn scheme_for(&self, mesh: &Mesh) -> SchemeConfig {
        let mut scheme = self.run.scheme.clone();
        if let Some(d) = &self.default_boundary {
            for tag in mesh.boundary_tags() {
                if !scheme.boundary.iter().any(|b| &b.tag == tag) {
                    scheme.boundary.push(BoundaryCondition { tag: tag.clone(), ..d.clone() });
                }
            }
        }
        scheme
    }

    /// Overrides the mesh perturbation seed.
    pub fn set_seed(&mut self, seed: u64) {
        self.run.seed = seed;
        if let MeshSource::Box(b) = &mut self.run.mesh.source {
            b.seed = seed;
        }
    }

    /// Field names to write, resolving the empty selection to all fields.
    pub fn output_fields(&self) -> Vec<String> {
        if !self.fields.is_empty() {
            return self.fields.clone();
        }
        let all: &[&str] = if self.run.scheme.model.is_euler() { &EULER_FIELDS[..3] } else { &SCALAR_FIELDS };
        all.iter().map(|s| s.to_string()).collect()
    }
}

/// The Sod, test-2 and blast presets as complete configurations.
pub fn preset_config(name: &str, n: usize) -> Option<CaseConfig> {
    let text = match name {
        "sod" | "test2" => {
            let flux = if name == "sod" { "roe" } else { "kfvs" };
            let t_end = if name == "sod" { 0.2 } else { 0.15 };
            format!(
                "[model]\nkind = euler\n[mesh]\npreset = channel\nn = {n}\n[scheme]\nflux = {flux}\n\
                 [boundary]\ndefault = slip_wall\nxmin = transmissive\nxmax = transmissive\n\
                 [initial]\npreset = {name}\n[time]\nt_end = {t_end}\n"
            )
        }
        "blast" => format!(
            "[model]\nkind = euler\n[mesh]\npreset = blast\nn = {n}\n[scheme]\nflux = kfvs\n\
             [boundary]\ndefault = transmissive\n[initial]\npreset = blast\n[time]\nt_end = 0.001\n"
        ),
        _ => return None,
    };
    parse_config(&text, Path::new(".")).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<CaseConfig, ConfigError> {
        parse_config(text, Path::new("/cases"))
    }

    const SOD: &str = "[model]\nkind = euler\n[mesh]\npreset = channel\n[scheme]\nflux = roe\n[initial]\npreset = sod\n";

    #[test]
    fn defaults_are_filled_in() {
        let c = parse(SOD).unwrap();
        let Model::Euler(gas) = c.run.scheme.model else { panic!() };
        assert_eq!(gas.gamma, 1.4);
        assert_eq!(c.run.scheme.time.cfl, 0.4);
        assert_eq!(c.run.scheme.recon.jameson_q, 2.0);
        assert_eq!(c.run.scheme.time.t_end, 0.0);
        assert_eq!(c.run.scheme.interp, InterpScheme::ConsistentShepard);
        assert_eq!(c.run.initial, sod());
        let MeshSource::Box(b) = &c.run.mesh.source else { panic!() };
        assert_eq!(b.cells, [100, 4, 4]);
    }

    #[test]
    fn euler_needs_a_flux() {
        let err = parse(&SOD.replace("flux = roe\n", "")).unwrap_err();
        assert!(err.message.contains("roe") && err.message.contains("kfvs"), "{err}");
        let err = parse(&SOD.replace("flux = roe", "flux = upwind")).unwrap_err();
        assert_eq!(err.line, Some(6));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse(&format!("{SOD}[time]\ncfl = 0.5\nbogus = 1\n")).unwrap_err();
        assert_eq!(err.line, Some(11));
        assert!(err.to_string().starts_with("line 11: unknown key 'bogus'"), "{err}");
        let err = parse(&SOD.replace("preset = sod", "preset = nonsense")).unwrap_err();
        assert_eq!(err.line, Some(8));
        let err = parse(&SOD.replace("[scheme]", "[scheme]\ninterpolation = cubic")).unwrap_err();
        assert!(err.message.contains("unknown interpolation 'cubic'"), "{err}");
        assert!(parse("kind = euler\n").unwrap_err().message.contains("outside any section"));
        assert!(parse(&format!("{SOD}[model]\n")).unwrap_err().message.contains("twice"));
    }

    #[test]
    fn missing_mesh_is_rejected() {
        let err = parse("[model]\nkind = euler\n[scheme]\nflux = roe\n[initial]\npreset = sod\n").unwrap_err();
        assert_eq!(err.to_string(), "missing [mesh] section");
        let err = parse(&SOD.replace("preset = channel", "n = 4")).unwrap_err();
        assert!(err.message.contains("needs one of"), "{err}");
    }

    #[test]
    fn empty_field_names_are_rejected() {
        let err = parse(&format!("{SOD}[output]\nfields = density, , pressure\n")).unwrap_err();
        assert_eq!(err.line, Some(10));
        assert!(err.message.contains("empty field name"));
        let ok = parse(&format!("{SOD}[output]\nfields = density,pressure\n")).unwrap();
        assert_eq!(ok.fields, ["density", "pressure"]);
        assert!(parse(&format!("{SOD}[output]\nfields = u\n")).is_err());
    }

    #[test]
    fn blast_preset_uses_the_cube_domain() {
        let c = preset_config("blast", 9).unwrap();
        let InitialCondition::Blast(b) = c.run.initial else { panic!() };
        assert_eq!((b.density, b.radius), (1.228, 5.0));
        let MeshSource::Box(spec) = &c.run.mesh.source else { panic!() };
        assert_eq!(spec.extents, Vec3::new(81.0, 81.0, 81.0));
        assert!(preset_config("sod", 50).is_some() && preset_config("test2", 50).is_some());
        assert!(preset_config("nothing", 50).is_none());
    }

    #[test]
    fn scalar_case_with_periodic_box_and_probes() {
        let text = "\
[model]
kind = advection
velocity = 1 0.5
[mesh]
cells = 8 8
split = alternating
perturb = 0.1
seed = 5
periodic = xmin:xmax, ymin:ymax
[initial]
preset = advected_profile
[time]
integrator = forward_euler
t_end = 0.1
[output]
directory = out
probe = mid 0 0.5 0 1 0 0 21
";
        let c = parse(text).unwrap();
        assert_eq!(c.run.scheme.flux, FluxScheme::Upwind);
        assert_eq!(c.run.mesh.periodic.len(), 2);
        assert_eq!(c.run.seed, 5);
        assert_eq!(c.run.output.directory.as_deref(), Some(Path::new("/cases/out")));
        assert_eq!(c.run.output.line_probes[0].samples, 21);
        assert_eq!(c.run.scheme.time.integrator, Integrator::ForwardEuler);
        assert!(matches!(c.run.initial, InitialCondition::Scalar(Profile::Sine { .. })));
        assert_eq!(c.output_fields(), ["u"]);
        let err = parse(&text.replace("advected_profile", "sod")).unwrap_err();
        assert!(err.message.contains("does not fit the model"), "{err}");
    }

    #[test]
    fn boundary_entries_and_default() {
        let text = format!("{SOD}[boundary]\ndefault = slip_wall\nxmin = supersonic_inflow 1 2 0 0 1\n");
        let c = parse(&text).unwrap();
        let mesh = c.run.mesh.build().unwrap();
        let scheme = c.scheme_for(&mesh);
        assert_eq!(scheme.boundary.len(), 6);
        let xmin = scheme.boundary.iter().find(|b| b.tag == "xmin").unwrap();
        assert_eq!((xmin.kind, xmin.data.len()), (BcKind::SupersonicInflow, 5));
        let err = parse(&format!("{SOD}[boundary]\nxmin = supersonic_inflow 1 2\n")).unwrap_err();
        assert!(err.message.contains("takes 5 value(s)"), "{err}");
        assert!(parse(&format!("{SOD}[boundary]\nxmin = sticky\n")).is_err());
    }

    #[test]
    fn piecewise_regions_parse() {
        let text = "[model]\nkind = advection\nvelocity = 1 0\n[mesh]\ncells = 4 4\n[initial]\npreset = piecewise\n\
                    default = 0\nregion = ball 0.5 0.5 0 0.2 : 1\nregion = halfspace 1 0 0 0.1 : 2\n";
        let c = parse(text).unwrap();
        let InitialCondition::Piecewise { regions, .. } = &c.run.initial else { panic!() };
        assert_eq!(regions.len(), 2);
        assert_eq!(c.run.initial.state_at(Vec3::new(0.5, 0.5, 0.0)), [1.0]);
        assert_eq!(c.run.initial.state_at(Vec3::new(0.05, 0.5, 0.0)), [2.0]);
    }

    #[test]
    fn seed_override_reaches_the_box() {
        let mut c = parse(&SOD.replace("preset = channel", "preset = channel\nperturb = 0.1")).unwrap();
        c.set_seed(42);
        let MeshSource::Box(b) = &c.run.mesh.source else { panic!() };
        assert_eq!((b.seed, c.run.seed), (42, 42));
    }
}
