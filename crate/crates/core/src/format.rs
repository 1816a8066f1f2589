//! JSON reading and writing for modules, diagrams, point sets and
//! presentations.
//!
//! Matrices are row-major nested arrays. A matrix with no entries may be
//! written as `[]` whatever its shape. Points are arrays whose entries are
//! integers or the string `"-inf"`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::extgrid::{ExtPoint, GridBox, PointSet};
use crate::grid_module::GridModule;
use crate::linalg::{FieldSpec, Matrix, PosetDiagram};
use crate::presentation::{Graded, Presentation};

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Format(format!("missing field '{key}'")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("{what} must be an array")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Format(format!("{what} must be a non-negative integer")))
}

fn int_vec(v: &Value, what: &str) -> Result<Vec<i64>> {
    as_array(v, what)?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Format(format!("{what} must hold integers"))))
        .collect()
}

pub fn parse_field(v: &Value) -> Result<FieldSpec> {
    let spec: FieldSpec = serde_json::from_value(v.clone())
        .map_err(|e| Error::Format(format!("bad field spec: {e}")))?;
    spec.checked()
}

pub fn field_to_json(f: FieldSpec) -> Value {
    serde_json::to_value(f).expect("field spec serializes")
}

pub fn parse_point(v: &Value, n: usize) -> Result<ExtPoint> {
    let p: ExtPoint =
        serde_json::from_value(v.clone()).map_err(|e| Error::Format(format!("bad point {v}: {e}")))?;
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    Ok(p)
}

pub fn point_to_json(p: &ExtPoint) -> Value {
    serde_json::to_value(p).expect("points serialize")
}

pub fn parse_box(v: &Value) -> Result<GridBox> {
    let a = int_vec(field_of(v, "a")?, "box corner a")?;
    let b = int_vec(field_of(v, "b")?, "box corner b")?;
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Format("box corners must have the same positive length".into()));
    }
    GridBox::new(a, b).map_err(|e| Error::Input(e.to_string()))
}

pub fn box_to_json(b: &GridBox) -> Value {
    json!({ "a": b.a, "b": b.b })
}

/// A point set: an array of points, `{"box": {"a":…,"b":…}}` for the integer
/// points of a box, or `{"ext_box": {"a":…,"b":…}}` for its extension.
pub fn parse_point_set(v: &Value, n: usize) -> Result<PointSet> {
    if let Some(arr) = v.as_array() {
        let pts = arr.iter().map(|p| parse_point(p, n)).collect::<Result<Vec<_>>>()?;
        return PointSet::from_points(n, pts);
    }
    let (bx, extended) = match (v.get("box"), v.get("ext_box")) {
        (Some(b), None) => (parse_box(b)?, false),
        (None, Some(b)) => (parse_box(b)?, true),
        _ => {
            return Err(Error::Format(
                "a point set is an array of points, {\"box\":…} or {\"ext_box\":…}".into(),
            ))
        }
    };
    if bx.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: bx.dim() });
    }
    Ok(if extended { bx.extended() } else { bx.to_point_set() })
}

pub fn point_set_to_json(s: &PointSet) -> Value {
    Value::Array(s.iter().map(point_to_json).collect())
}

/// Parses a matrix of the given shape.
pub fn parse_matrix(field: FieldSpec, v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let arr = as_array(v, "matrix")?;
    if rows * cols == 0 && arr.iter().all(|r| r.as_array().is_some_and(|x| x.is_empty())) {
        if arr.is_empty() || arr.len() == rows {
            return Ok(Matrix::zeros(field, rows, cols));
        }
    }
    if arr.len() != rows {
        return Err(Error::Shape(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let mut m = Matrix::zeros(field, rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = as_array(row, "matrix row")?;
        if row.len() != cols {
            return Err(Error::Shape(format!(
                "matrix row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, field.parse_json(x)?);
        }
    }
    Ok(m)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| f.to_json(x)).collect()))
            .collect(),
    )
}

fn header(v: &Value) -> Result<(FieldSpec, usize)> {
    let field = parse_field(field_of(v, "field")?)?;
    let n = as_usize(field_of(v, "n")?, "n")?;
    if n == 0 {
        return Err(Error::Format("n must be at least 1".into()));
    }
    Ok((field, n))
}

/// Reads a module file. Shapes are checked here; commutativity is left to
/// [`GridModule::validate`].
pub fn parse_module(v: &Value) -> Result<GridModule> {
    let (field, n) = header(v)?;
    let bx = parse_box(field_of(v, "box")?)?;
    if bx.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: bx.dim() });
    }
    let dims = as_array(field_of(v, "dims")?, "dims")?
        .iter()
        .map(|d| as_usize(d, "dims entry"))
        .collect::<Result<Vec<_>>>()?;
    if dims.len() != bx.num_points() {
        return Err(Error::Format(format!(
            "dims has {} entries, the box has {} points",
            dims.len(),
            bx.num_points()
        )));
    }
    let dim_at = |c: &[i64]| dims[bx.index_of(c).expect("checked in box")];
    let mut maps = BTreeMap::new();
    let empty = Vec::new();
    let listed = match v.get("maps") {
        Some(m) => as_array(m, "maps")?,
        None => &empty,
    };
    for entry in listed {
        let from = int_vec(field_of(entry, "from")?, "map source")?;
        let axis = as_usize(field_of(entry, "axis")?, "axis")?;
        if from.len() != n || !bx.contains(&from) {
            return Err(Error::Input(format!("map source {from:?} is not in the box")));
        }
        if axis == 0 || axis > n {
            return Err(Error::Input(format!("axis {axis} is out of range 1..={n}")));
        }
        let mut to = from.clone();
        to[axis - 1] += 1;
        if !bx.contains(&to) {
            return Err(Error::Input(format!(
                "map from {from:?} along axis {axis} leaves the box"
            )));
        }
        let m = parse_matrix(field, field_of(entry, "matrix")?, dim_at(&to), dim_at(&from))?;
        if maps.insert((from.clone(), axis - 1), m).is_some() {
            return Err(Error::Input(format!("map from {from:?} along axis {axis} given twice")));
        }
    }
    GridModule::new(field, bx, dims, maps)
}

/// Writes a module file; zero maps are omitted.
pub fn module_to_json(m: &GridModule) -> Value {
    let maps: Vec<Value> = m
        .steps()
        .filter(|(_, _, mat)| !mat.is_zero())
        .map(|(c, axis, mat)| json!({ "from": c, "axis": axis + 1, "matrix": matrix_to_json(mat) }))
        .collect();
    json!({
        "field": field_to_json(m.field()),
        "n": m.dim(),
        "box": box_to_json(m.grid_box()),
        "dims": m.dims(),
        "maps": maps,
    })
}

/// Reads a diagram file: `points`, `dims` aligned with `points`, and cover
/// maps `{"from":p,"to":q,"matrix":…}`.
pub fn parse_diagram(v: &Value) -> Result<PosetDiagram> {
    let (field, n) = header(v)?;
    let pts = as_array(field_of(v, "points")?, "points")?
        .iter()
        .map(|p| parse_point(p, n))
        .collect::<Result<Vec<_>>>()?;
    let dims = as_array(field_of(v, "dims")?, "dims")?
        .iter()
        .map(|d| as_usize(d, "dims entry"))
        .collect::<Result<Vec<_>>>()?;
    if dims.len() != pts.len() {
        return Err(Error::Format("dims must align with points".into()));
    }
    let table: BTreeMap<ExtPoint, usize> = pts.iter().cloned().zip(dims).collect();
    if table.len() != pts.len() {
        return Err(Error::Input("points must be distinct".into()));
    }
    let set = PointSet::from_points(n, pts)?;
    let mut maps = BTreeMap::new();
    let empty = Vec::new();
    let listed = match v.get("maps") {
        Some(m) => as_array(m, "maps")?,
        None => &empty,
    };
    for entry in listed {
        let from = parse_point(field_of(entry, "from")?, n)?;
        let to = parse_point(field_of(entry, "to")?, n)?;
        let (Some(&df), Some(&dt)) = (table.get(&from), table.get(&to)) else {
            return Err(Error::Input(format!("map {from} -> {to} uses an unknown point")));
        };
        let m = parse_matrix(field, field_of(entry, "matrix")?, dt, df)?;
        maps.insert((from, to), m);
    }
    PosetDiagram::new(field, &set, |p| table[p], maps)
}

pub fn diagram_to_json(d: &PosetDiagram) -> Value {
    let maps: Vec<Value> = d
        .cover_maps()
        .filter(|(_, _, m)| !m.is_zero())
        .map(|(c, e, m)| {
            json!({ "from": point_to_json(c), "to": point_to_json(e), "matrix": matrix_to_json(m) })
        })
        .collect();
    json!({
        "field": field_to_json(d.field()),
        "n": d.ambient_dim(),
        "points": d.points().iter().map(point_to_json).collect::<Vec<_>>(),
        "dims": d.dims(),
        "maps": maps,
    })
}

/// Writes a presentation. Blocks of `rel_matrix` are listed for every
/// relation point and every generator point below it, so the grading is
/// visible in the file.
pub fn presentation_to_json(p: &Presentation) -> Value {
    let generators: Vec<Value> = p
        .generators
        .iter()
        .zip(&p.generator_images)
        .map(|(g, img)| {
            json!({
                "point": point_to_json(&g.point),
                "multiplicity": g.multiplicity,
                "image": matrix_to_json(img),
            })
        })
        .collect();
    let relations: Vec<Value> = p
        .relations
        .iter()
        .map(|r| json!({ "point": point_to_json(&r.point), "multiplicity": r.multiplicity }))
        .collect();
    let mut blocks = Vec::new();
    for (ri, r) in p.relations.iter().enumerate() {
        for (gi, g) in p.generators.iter().enumerate() {
            if g.point.leq(&r.point) {
                blocks.push(json!({
                    "relation": point_to_json(&r.point),
                    "generator": point_to_json(&g.point),
                    "matrix": matrix_to_json(&p.block(ri, gi)),
                }));
            }
        }
    }
    json!({
        "field": field_to_json(p.field),
        "n": p.dim,
        "generators": generators,
        "relations": relations,
        "rel_matrix": blocks,
    })
}

fn parse_graded(v: &Value, n: usize) -> Result<Graded> {
    let point = parse_point(field_of(v, "point")?, n)?;
    let multiplicity = as_usize(field_of(v, "multiplicity")?, "multiplicity")?;
    if multiplicity == 0 {
        return Err(Error::Input(format!("multiplicity at {point} must be positive")));
    }
    Ok(Graded { point, multiplicity })
}

/// Reads a presentation. The image of a generator group has one row per
/// dimension of the module at its point, which is only known to the caller,
/// so its row count is taken from the file. Missing blocks are zero.
pub fn parse_presentation(v: &Value) -> Result<Presentation> {
    let (field, n) = header(v)?;
    let mut generators = Vec::new();
    let mut generator_images = Vec::new();
    for g in as_array(field_of(v, "generators")?, "generators")? {
        let gr = parse_graded(g, n)?;
        let img = field_of(g, "image")?;
        let rows = as_array(img, "image")?.len();
        generator_images.push(parse_matrix(field, img, rows, gr.multiplicity)?);
        generators.push(gr);
    }
    let relations = as_array(field_of(v, "relations")?, "relations")?
        .iter()
        .map(|r| parse_graded(r, n))
        .collect::<Result<Vec<_>>>()?;
    let check_sorted = |gs: &[Graded], what: &str| -> Result<()> {
        if gs.windows(2).all(|w| w[0].point < w[1].point) {
            Ok(())
        } else {
            Err(Error::Input(format!("{what} must be listed once per point, in lexicographic order")))
        }
    };
    check_sorted(&generators, "generators")?;
    check_sorted(&relations, "relations")?;

    let offsets = |gs: &[Graded]| -> BTreeMap<ExtPoint, (usize, usize)> {
        let mut acc = 0;
        gs.iter()
            .map(|g| {
                let o = acc;
                acc += g.multiplicity;
                (g.point.clone(), (o, g.multiplicity))
            })
            .collect()
    };
    let goff = offsets(&generators);
    let roff = offsets(&relations);
    let ng: usize = generators.iter().map(|g| g.multiplicity).sum();
    let nr: usize = relations.iter().map(|g| g.multiplicity).sum();
    let mut rel_matrix = Matrix::zeros(field, ng, nr);
    let empty = Vec::new();
    let blocks = match v.get("rel_matrix") {
        Some(b) => as_array(b, "rel_matrix")?,
        None => &empty,
    };
    for b in blocks {
        let rp = parse_point(field_of(b, "relation")?, n)?;
        let gp = parse_point(field_of(b, "generator")?, n)?;
        let (Some(&(r0, rm)), Some(&(g0, gm))) = (roff.get(&rp), goff.get(&gp)) else {
            return Err(Error::Input(format!("block ({rp}, {gp}) names an unknown point")));
        };
        let m = parse_matrix(field, field_of(b, "matrix")?, gm, rm)?;
        rel_matrix.put_block(g0, r0, &m);
    }
    let p = Presentation { field, dim: n, generators, generator_images, relations, rel_matrix };
    p.check_shape().map_err(|e| Error::Input(e.to_string()))?;
    Ok(p)
}

/// Serializes a report; structs keyed by points must go through
/// [`multiplicities_to_json`] instead.
pub fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

/// `BTreeMap<ExtPoint, usize>` as a list of `{"point", "multiplicity"}`.
pub fn multiplicities_to_json(m: &BTreeMap<ExtPoint, usize>) -> Value {
    Value::Array(
        m.iter()
            .map(|(p, k)| json!({ "point": point_to_json(p), "multiplicity": k }))
            .collect(),
    )
}

/// Pretty JSON with a trailing newline, stable across runs.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values render");
    s.push('\n');
    s
}

/// Merges `extra` into the object `base`.
pub fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        let e: Map<String, Value> = e;
        b.extend(e);
    }
    base
}
