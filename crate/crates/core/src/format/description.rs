//! Assembly description files.
//!
//! Line-oriented INI: `[section]` headers, `key = value` lines, and comments
//! starting with `#` or `;`. Lengths carry an `_mm` suffix, angles `_deg`,
//! remanence `_T`. Vectors are comma separated. Sections:
//!
//! ```text
//! [assembly]  resolution = 5             cells per axis for every magnet
//!             exclusion_mm = 0           default exclusion radius of [dipole] entries
//! [magnet]    shape = sphere | cube | cylinder | cuboid | plate
//!             dims_mm = ...              sphere: d; cube: edge; cylinder: d, h; cuboid: lx, ly, lz; plate: lx, ly, t
//!             pos_mm = 0, 0, 0
//!             rot_deg = 0, 0, 0          about x, then y, then z (fixed axes)
//!             magnetization_dir = 0, 0, 1
//!             remanence_T = 1.32
//! [dipole]    pos_mm, moment_Am2, exclusion_mm
//! [halbach]   n = 5, cube_mm = 10, gap_mm = 0, remanence_T
//! [ring]      n = 12, plate_mm = 10, 10, 1, ring_radius_mm = 30, skew_deg = 15, remanence_T
//! [lattice]   count = 19 | 21, sphere_d_mm = 5, pattern = all-up | alternating, remanence_T
//! [grid]      rows = 4, cols = 4, disk_mm = 10, 4, pattern = checkerboard | all-up,
//!             orientations = +1, -1, ... (overrides pattern), gap_mm = 0, remanence_T
//! [cube]      edge_mm = 10, remanence_T
//! [model]     kind = uniform   b_T = x, y, z
//!             kind = dipole    moment_Am2, pos_mm
//!             kind = spiral    pitch, core_radius_mm, strength_T, pole_separation_mm
//! ```
//!
//! Magnet-like sections are concatenated in file order. A `[model]` section
//! stands alone: it cannot be combined with magnets or dipoles.

use std::collections::HashMap;

use super::FormatError;
use crate::constants::N42_REMANENCE;
use crate::error::{Error, UsageError};
use crate::field::{FieldError, ModelField, SpiralVortexParams, VectorField};
use crate::geometry::{Rotation, Vec3};
use crate::sources::{
    build_grid_array, build_halbach_linear, build_ring_twister, build_single_cube, build_triangular_lattice,
    presets::DEFAULT_RESOLUTION, Assembly, DipoleSource, GridParams, GridPattern, HalbachParams, LatticeParams,
    MagnetShape, MomentPattern, PlacedMagnet, RingParams, UniformMagnetization,
};

/// One `[name]` block with its entries in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct IniSection {
    pub name: String,
    pub line: usize,
    pub entries: Vec<(String, String, usize)>,
}

/// Splits INI text into sections. Entries before the first header land in a
/// section with an empty name.
pub fn parse_ini(text: &str) -> Result<Vec<IniSection>, FormatError> {
    let mut sections = vec![IniSection { name: String::new(), line: 0, entries: Vec::new() }];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| FormatError::Syntax { line: line_no, message: "unterminated section header".into() })?
                .trim();
            if name.is_empty() {
                return Err(FormatError::Syntax { line: line_no, message: "empty section name".into() });
            }
            sections.push(IniSection { name: name.to_string(), line: line_no, entries: Vec::new() });
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| FormatError::Syntax {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = k.trim();
        if key.is_empty() {
            return Err(FormatError::Syntax { line: line_no, message: "empty key".into() });
        }
        let section = sections.last_mut().expect("at least the preamble section");
        if section.entries.iter().any(|(existing, _, _)| existing == key) {
            return Err(FormatError::Syntax { line: line_no, message: format!("duplicate key `{key}`") });
        }
        section.entries.push((key.to_string(), v.trim().to_string(), line_no));
    }
    if sections[0].entries.is_empty() {
        sections.remove(0);
    }
    Ok(sections)
}

/// Typed view of one section that tracks which keys were consumed.
struct Fields<'a> {
    section: &'a IniSection,
    map: HashMap<&'a str, (&'a str, usize)>,
}

impl<'a> Fields<'a> {
    fn new(section: &'a IniSection, allowed: &[&str]) -> Result<Self, FormatError> {
        for (k, _, line) in &section.entries {
            if !allowed.contains(&k.as_str()) {
                return Err(FormatError::UnknownKey { line: *line, section: section.name.clone(), key: k.clone() });
            }
        }
        let map = section.entries.iter().map(|(k, v, l)| (k.as_str(), (v.as_str(), *l))).collect();
        Ok(Fields { section, map })
    }

    fn raw(&self, key: &str) -> Option<(&'a str, usize)> {
        self.map.get(key).copied()
    }

    fn bad(key: &str, line: usize, message: impl Into<String>) -> FormatError {
        FormatError::Value { line, key: key.to_string(), message: message.into() }
    }

    fn missing(&self, key: &str) -> FormatError {
        FormatError::MissingKey { line: self.section.line, section: self.section.name.clone(), key: key.to_string() }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, FormatError> {
        let Some((v, line)) = self.raw(key) else { return Ok(None) };
        v.split(',')
            .map(|c| {
                let c = c.trim();
                c.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Self::bad(key, line, format!("`{c}` is not a finite number")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn list_n(&self, key: &str, n: usize) -> Result<Option<Vec<f64>>, FormatError> {
        match self.list(key)? {
            Some(v) if v.len() != n => {
                Err(Self::bad(key, self.raw(key).map_or(0, |r| r.1), format!("expected {n} value(s), got {}", v.len())))
            }
            other => Ok(other),
        }
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, FormatError> {
        Ok(self.list_n(key, 1)?.map_or(default, |v| v[0]))
    }

    fn f64_req(&self, key: &str) -> Result<f64, FormatError> {
        self.list_n(key, 1)?.map(|v| v[0]).ok_or_else(|| self.missing(key))
    }

    fn vec3_or(&self, key: &str, default: Vec3) -> Result<Vec3, FormatError> {
        Ok(self.list_n(key, 3)?.map_or(default, |v| Vec3::new(v[0], v[1], v[2])))
    }

    fn vec3_req(&self, key: &str) -> Result<Vec3, FormatError> {
        self.list_n(key, 3)?.map(|v| Vec3::new(v[0], v[1], v[2])).ok_or_else(|| self.missing(key))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, FormatError> {
        match self.raw(key) {
            None => Ok(default),
            Some((v, line)) => {
                v.parse().map_err(|_| Self::bad(key, line, format!("`{v}` is not a non-negative integer")))
            }
        }
    }

    fn str_or(&self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).map_or(default, |r| r.0)
    }

    fn line_of(&self, key: &str) -> usize {
        self.raw(key).map_or(self.section.line, |r| r.1)
    }
}

fn mm(v: f64) -> f64 {
    v / 1000.0
}

/// One parsed section of a description.
#[derive(Debug, Clone, PartialEq)]
pub enum Section {
    Magnet(PlacedMagnet),
    Dipole { dipole: DipoleSource, exclusion: Option<f64> },
    Halbach(HalbachParams),
    Ring(RingParams),
    Lattice(LatticeParams),
    Grid(GridParams),
    Cube { edge: f64, remanence: f64 },
    Model(ModelField),
}

/// A parsed description file.
#[derive(Debug, Clone, PartialEq)]
pub struct Description {
    pub resolution: usize,
    /// Default exclusion radius of bare dipoles, m.
    pub exclusion: f64,
    pub sections: Vec<Section>,
}

fn magnet_section(f: &Fields) -> Result<PlacedMagnet, FormatError> {
    let (shape_name, shape_line) = f.raw("shape").ok_or_else(|| f.missing("shape"))?;
    let dims = f.list("dims_mm")?.ok_or_else(|| f.missing("dims_mm"))?;
    let dims_line = f.line_of("dims_mm");
    let want = match shape_name {
        "sphere" | "cube" => 1,
        "cylinder" => 2,
        "cuboid" | "plate" => 3,
        other => {
            return Err(Fields::bad("shape", shape_line, format!("unknown shape `{other}`")));
        }
    };
    if dims.len() != want {
        return Err(Fields::bad("dims_mm", dims_line, format!("{shape_name} takes {want} dimension(s)")));
    }
    let d: Vec<f64> = dims.into_iter().map(mm).collect();
    let shape = match shape_name {
        "sphere" => MagnetShape::sphere(d[0] / 2.0),
        "cube" => MagnetShape::cube(d[0]),
        "cylinder" => MagnetShape::cylinder(d[0] / 2.0, d[1]),
        "cuboid" => MagnetShape::cuboid(d[0], d[1], d[2]),
        _ => MagnetShape::plate(d[0], d[1], d[2]),
    }
    .map_err(|e| Fields::bad("dims_mm", dims_line, e.to_string()))?;
    let pos = f.vec3_or("pos_mm", Vec3::zeros())? / 1000.0;
    let rot = f.list_n("rot_deg", 3)?.unwrap_or(vec![0.0; 3]);
    let rotation = Rotation::from_xyz_deg([rot[0], rot[1], rot[2]])
        .map_err(|e| Fields::bad("rot_deg", f.line_of("rot_deg"), e.to_string()))?;
    let dir = f.vec3_or("magnetization_dir", Vec3::z())?;
    let br = f.f64_or("remanence_T", N42_REMANENCE)?;
    let magnetization = UniformMagnetization::from_remanence(dir, br)
        .map_err(|e| Fields::bad("magnetization_dir", f.line_of("magnetization_dir"), e.to_string()))?;
    PlacedMagnet::new(shape, pos, rotation, magnetization)
        .map_err(|e| Fields::bad("pos_mm", f.line_of("pos_mm"), e.to_string()))
}

fn model_fields(f: &Fields, kind: &str, kind_line: usize) -> Result<ModelField, FormatError> {
    let model = match kind {
        "uniform" => ModelField::Uniform { b: f.vec3_req("b_T")? },
        "dipole" => ModelField::PointDipole {
            moment: f.vec3_req("moment_Am2")?,
            position: f.vec3_or("pos_mm", Vec3::zeros())? / 1000.0,
        },
        "spiral" => ModelField::SpiralVortex(SpiralVortexParams {
            pitch: f.f64_req("pitch")?,
            core_radius: mm(f.f64_req("core_radius_mm")?),
            strength: f.f64_or("strength_T", 0.1)?,
            pole_separation: mm(f.f64_or("pole_separation_mm", 0.0)?),
        }),
        other => return Err(Fields::bad("kind", kind_line, format!("unknown model kind `{other}`"))),
    };
    model.validated().map_err(|e| Fields::bad("kind", kind_line, e.to_string()))
}

const MODEL_KEYS: [&str; 8] =
    ["kind", "b_T", "moment_Am2", "pos_mm", "pitch", "core_radius_mm", "strength_T", "pole_separation_mm"];

fn section(s: &IniSection) -> Result<Option<Section>, FormatError> {
    Ok(Some(match s.name.as_str() {
        "assembly" => return Ok(None),
        "magnet" => Section::Magnet(magnet_section(&Fields::new(
            s,
            &["shape", "dims_mm", "pos_mm", "rot_deg", "magnetization_dir", "remanence_T"],
        )?)?),
        "dipole" => {
            let f = Fields::new(s, &["pos_mm", "moment_Am2", "exclusion_mm"])?;
            let dipole = DipoleSource::new(f.vec3_req("pos_mm")? / 1000.0, f.vec3_req("moment_Am2")?)
                .map_err(|e| Fields::bad("pos_mm", f.line_of("pos_mm"), e.to_string()))?;
            Section::Dipole { dipole, exclusion: f.list_n("exclusion_mm", 1)?.map(|v| mm(v[0])) }
        }
        "halbach" => {
            let f = Fields::new(s, &["n", "cube_mm", "gap_mm", "remanence_T"])?;
            let d = HalbachParams::default();
            let edge = mm(f.f64_or("cube_mm", 10.0)?);
            Section::Halbach(HalbachParams {
                n: f.usize_or("n", d.n)?,
                element: MagnetShape::Cuboid { lx: edge, ly: edge, lz: edge },
                gap: mm(f.f64_or("gap_mm", 0.0)?),
                remanence: f.f64_or("remanence_T", d.remanence)?,
                ..d
            })
        }
        "ring" => {
            let f = Fields::new(s, &["n", "plate_mm", "ring_radius_mm", "skew_deg", "remanence_T"])?;
            let d = RingParams::default();
            let plate = f.list_n("plate_mm", 3)?.map_or(d.plate, |v| MagnetShape::Plate {
                lx: mm(v[0]),
                ly: mm(v[1]),
                thickness: mm(v[2]),
            });
            Section::Ring(RingParams {
                n: f.usize_or("n", d.n)?,
                plate,
                ring_radius: mm(f.f64_or("ring_radius_mm", d.ring_radius * 1000.0)?),
                skew: f.f64_or("skew_deg", d.skew.to_degrees())?.to_radians(),
                remanence: f.f64_or("remanence_T", d.remanence)?,
                ..d
            })
        }
        "lattice" => {
            let f = Fields::new(s, &["count", "sphere_d_mm", "pattern", "remanence_T"])?;
            let d = LatticeParams::default();
            let pattern = match f.str_or("pattern", "all-up") {
                "all-up" => MomentPattern::AllUp,
                "alternating" => MomentPattern::AlternatingInPlane,
                other => {
                    return Err(Fields::bad("pattern", f.line_of("pattern"), format!("unknown pattern `{other}`")))
                }
            };
            Section::Lattice(LatticeParams {
                count: f.usize_or("count", d.count)?,
                sphere_d: mm(f.f64_or("sphere_d_mm", d.sphere_d * 1000.0)?),
                pattern,
                remanence: f.f64_or("remanence_T", d.remanence)?,
                ..d
            })
        }
        "grid" => {
            let f = Fields::new(s, &["rows", "cols", "disk_mm", "pattern", "orientations", "gap_mm", "remanence_T"])?;
            let d = GridParams::default();
            let (rows, cols) = (f.usize_or("rows", d.rows)?, f.usize_or("cols", d.cols)?);
            let disk = f
                .list_n("disk_mm", 2)?
                .map_or(d.disk, |v| MagnetShape::Cylinder { radius: mm(v[0]) / 2.0, height: mm(v[1]) });
            let orientations = match f.list("orientations")? {
                Some(v) => v.into_iter().map(|x| x as i8).collect(),
                None => match f.str_or("pattern", "checkerboard") {
                    "checkerboard" => GridPattern::Checkerboard.orientations(rows, cols),
                    "all-up" => GridPattern::AllUp.orientations(rows, cols),
                    other => {
                        return Err(Fields::bad("pattern", f.line_of("pattern"), format!("unknown pattern `{other}`")))
                    }
                },
            };
            Section::Grid(GridParams {
                rows,
                cols,
                disk,
                orientations,
                remanence: f.f64_or("remanence_T", d.remanence)?,
                gap: mm(f.f64_or("gap_mm", 0.0)?),
                ..d
            })
        }
        "cube" => {
            let f = Fields::new(s, &["edge_mm", "remanence_T"])?;
            Section::Cube { edge: mm(f.f64_or("edge_mm", 10.0)?), remanence: f.f64_or("remanence_T", N42_REMANENCE)? }
        }
        "model" => {
            let f = Fields::new(s, &MODEL_KEYS)?;
            let (kind, line) = f.raw("kind").ok_or_else(|| f.missing("kind"))?;
            Section::Model(model_fields(&f, kind, line)?)
        }
        other => return Err(FormatError::Syntax { line: s.line, message: format!("unknown section [{other}]") }),
    }))
}

pub fn parse_description(text: &str) -> Result<Description, FormatError> {
    let mut desc = Description { resolution: DEFAULT_RESOLUTION, exclusion: 0.0, sections: Vec::new() };
    for s in parse_ini(text)? {
        if s.name.is_empty() {
            let (k, _, line) = &s.entries[0];
            return Err(FormatError::Syntax {
                line: *line,
                message: format!("`{k}` appears before any section header"),
            });
        }
        if s.name == "assembly" {
            let f = Fields::new(&s, &["resolution", "exclusion_mm"])?;
            desc.resolution = f.usize_or("resolution", DEFAULT_RESOLUTION)?;
            desc.exclusion = mm(f.f64_or("exclusion_mm", 0.0)?);
        } else if let Some(sec) = section(&s)? {
            desc.sections.push(sec);
        }
    }
    Ok(desc)
}

/// Parses an inline model such as `spiral pitch=0.2 core_radius_mm=1`,
/// using the `[model]` keys.
pub fn parse_model_spec(spec: &str) -> Result<ModelField, FormatError> {
    let mut tokens = spec.split_whitespace();
    let kind = tokens.next().ok_or_else(|| FormatError::Syntax { line: 1, message: "empty model spec".into() })?;
    let mut entries = vec![("kind".to_string(), kind.to_string(), 1)];
    for t in tokens {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| FormatError::Syntax { line: 1, message: format!("expected key=value, got `{t}`") })?;
        entries.push((k.to_string(), v.to_string(), 1));
    }
    let s = IniSection { name: "model".into(), line: 1, entries };
    let f = Fields::new(&s, &MODEL_KEYS)?;
    model_fields(&f, kind, 1)
}

/// A field source loaded from a description.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Assembly(Assembly),
    Model(ModelField),
}

impl Description {
    /// Builds the described source: either the concatenation of every magnet,
    /// dipole and preset section, or a single model field.
    pub fn build(&self) -> Result<Source, Error> {
        let models: Vec<&ModelField> =
            self.sections.iter().filter_map(|s| if let Section::Model(m) = s { Some(m) } else { None }).collect();
        if !models.is_empty() {
            if self.sections.len() > 1 {
                return Err(UsageError::new("a [model] section cannot be combined with other sources").into());
            }
            return Ok(Source::Model(*models[0]));
        }
        let res = self.resolution;
        let mut parts: Vec<Assembly> = Vec::new();
        let mut pending: Vec<PlacedMagnet> = Vec::new();
        let flush = |pending: &mut Vec<PlacedMagnet>, parts: &mut Vec<Assembly>| -> Result<(), Error> {
            if !pending.is_empty() {
                parts.push(Assembly::discretize(std::mem::take(pending), res)?);
            }
            Ok(())
        };
        for s in &self.sections {
            if let Section::Magnet(m) = s {
                pending.push(*m);
                continue;
            }
            flush(&mut pending, &mut parts)?;
            parts.push(match s {
                Section::Dipole { dipole, exclusion } => {
                    Assembly::from_dipoles(vec![*dipole], exclusion.unwrap_or(self.exclusion))?
                }
                Section::Halbach(p) => build_halbach_linear(&HalbachParams { resolution: res, ..p.clone() })?,
                Section::Ring(p) => build_ring_twister(&RingParams { resolution: res, ..p.clone() })?,
                Section::Lattice(p) => build_triangular_lattice(&LatticeParams { resolution: res, ..p.clone() })?,
                Section::Grid(p) => build_grid_array(&GridParams { resolution: res, ..p.clone() })?,
                Section::Cube { edge, remanence } => build_single_cube(*edge, *remanence, res)?,
                Section::Magnet(_) | Section::Model(_) => unreachable!("handled above"),
            });
        }
        flush(&mut pending, &mut parts)?;
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or_else(|| UsageError::new("description defines no magnets, dipoles or model"))?;
        Ok(Source::Assembly(iter.fold(first, |acc, p| acc.union(&p))))
    }
}

impl VectorField for Source {
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        match self {
            Source::Assembly(a) => a.field(p),
            Source::Model(m) => m.field(p),
        }
    }
    fn clearance(&self, p: &Vec3) -> Option<f64> {
        match self {
            Source::Assembly(a) => a.clearance(p),
            Source::Model(m) => m.clearance(p),
        }
    }
    fn check_segment(&self, a: &Vec3, b: &Vec3) -> Result<(), FieldError> {
        match self {
            Source::Assembly(x) => x.check_segment(a, b),
            Source::Model(m) => m.check_segment(a, b),
        }
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Writes `assembly` as explicit `[magnet]` and `[dipole]` sections. Numbers
/// use the shortest representation that parses back to the same value.
pub fn write_description(assembly: &Assembly) -> String {
    let mut s = String::from("[assembly]\n");
    if let Some(res) = assembly.resolution() {
        s.push_str(&format!("resolution = {res}\n"));
    }
    for m in assembly.magnets() {
        let dims: Vec<f64> = match m.shape {
            MagnetShape::Sphere { radius } => vec![2.0 * radius],
            MagnetShape::Cylinder { radius, height } => vec![2.0 * radius, height],
            MagnetShape::Cuboid { lx, ly, lz } => vec![lx, ly, lz],
            MagnetShape::Plate { lx, ly, thickness } => vec![lx, ly, thickness],
        };
        let dims: Vec<f64> = dims.into_iter().map(|d| d * 1000.0).collect();
        let pos: Vec<f64> = m.position.iter().map(|c| c * 1000.0).collect();
        let dir: Vec<f64> = m.magnetization.direction().iter().copied().collect();
        s.push_str(&format!(
            "\n[magnet]\nshape = {}\ndims_mm = {}\npos_mm = {}\nrot_deg = {}\nmagnetization_dir = {}\nremanence_T = {}\n",
            m.shape.kind(),
            list(&dims),
            list(&pos),
            list(&m.rotation.to_xyz_deg()),
            list(&dir),
            m.magnetization.remanence(),
        ));
    }
    for (d, excl) in assembly.bare_dipoles() {
        let pos: Vec<f64> = d.position.iter().map(|c| c * 1000.0).collect();
        let mom: Vec<f64> = d.moment.iter().copied().collect();
        s.push_str(&format!(
            "\n[dipole]\npos_mm = {}\nmoment_Am2 = {}\nexclusion_mm = {}\n",
            list(&pos),
            list(&mom),
            excl * 1000.0
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ini_structure_and_errors() {
        let secs = parse_ini("# c\n[a]\nx = 1\n; c\n[b]\ny=2,3\n").unwrap();
        assert_eq!(secs.len(), 2);
        assert_eq!(secs[1].entries[0], ("y".into(), "2,3".into(), 6));
        assert!(matches!(parse_ini("[a\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_ini("[a]\nnovalue\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_ini("[a]\nx=1\nx=2\n"), Err(FormatError::Syntax { line: 3, .. })));
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let err = parse_description("[ring]\nn = 12\ncolour = red\n").unwrap_err();
        assert_eq!(err, FormatError::UnknownKey { line: 3, section: "ring".into(), key: "colour".into() });
    }

    #[test]
    fn presets_build() {
        let d = parse_description("[assembly]\nresolution = 3\n[ring]\nn = 12\nskew_deg = 15\n").unwrap();
        let Source::Assembly(a) = d.build().unwrap() else { panic!("expected an assembly") };
        assert_eq!(a.magnets().len(), 12);
        assert_eq!(a.resolution(), Some(3));
        let d = parse_description("[lattice]\ncount = 21\n").unwrap();
        let Source::Assembly(a) = d.build().unwrap() else { panic!() };
        assert_eq!(a.magnets().len(), 21);
    }

    #[test]
    fn round_trip_reproduces_geometry() {
        let d = parse_description("[assembly]\nresolution = 3\n[ring]\nn = 6\nskew_deg = 20\n[cube]\nedge_mm = 4\n")
            .unwrap();
        let Source::Assembly(a) = d.build().unwrap() else { panic!() };
        let text = write_description(&a);
        let Source::Assembly(b) = parse_description(&text).unwrap().build().unwrap() else { panic!() };
        assert_eq!(a.dipoles().len(), b.dipoles().len());
        for (x, y) in a.dipoles().iter().zip(b.dipoles()) {
            assert!((x.position - y.position).norm() <= 1e-15);
            assert!((x.moment - y.moment).norm() <= 1e-12 * x.moment.norm().max(1e-30));
        }
        assert_eq!(text, write_description(&b));
    }

    #[test]
    fn bare_dipoles_round_trip() {
        let d = parse_description("[assembly]\nexclusion_mm = 1\n[dipole]\npos_mm = 0, 0, 0\nmoment_Am2 = 0, 0, 1\n")
            .unwrap();
        let Source::Assembly(a) = d.build().unwrap() else { panic!() };
        assert_eq!(a.exclusion_radii(), &[1e-3]);
        let Source::Assembly(b) = parse_description(&write_description(&a)).unwrap().build().unwrap() else { panic!() };
        assert_eq!(a, b);
    }

    #[test]
    fn models_parse_inline_and_in_files() {
        let m = parse_model_spec("spiral pitch=0.2 core_radius_mm=1 strength_T=0.1").unwrap();
        assert!(matches!(m, ModelField::SpiralVortex(p) if p.pitch == 0.2 && p.core_radius == 1e-3));
        let d = parse_description("[model]\nkind = uniform\nb_T = 0, 0, 0.1\n").unwrap();
        assert_eq!(d.build().unwrap(), Source::Model(ModelField::Uniform { b: Vec3::new(0.0, 0.0, 0.1) }));
        assert!(parse_description("[model]\nkind = uniform\nb_T = 0,0,1\n[cube]\n").unwrap().build().is_err());
        assert!(parse_model_spec("vortex pitch=1").is_err());
    }

    #[test]
    fn value_errors_name_the_line() {
        let err = parse_description("[magnet]\nshape = sphere\ndims_mm = 5, 5\n").unwrap_err();
        assert!(matches!(err, FormatError::Value { line: 3, .. }));
        let err = parse_description("[magnet]\ndims_mm = 5\n").unwrap_err();
        assert!(matches!(err, FormatError::MissingKey { line: 1, .. }));
    }
}
