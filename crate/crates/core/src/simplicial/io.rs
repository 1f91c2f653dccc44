use std::fmt::{self, Write as _};

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{Complex, ComplexError, Scalar};

/// On-disk complex:
/// `{"dim": 2, "vertices": {"a": ["0","0"], ..}, "maximal": [["a","b","c"], ..]}`.
///
/// `dim` is the number of coordinates of each vertex. Coordinates are
/// strings `"p/q"` or integers; the vertex order in the file is the
/// canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(serialize_with = "write_table", deserialize_with = "read_table")]
    pub vertices: Vec<(String, Vec<String>)>,
    #[serde(default)]
    pub maximal: Vec<Vec<String>>,
}

fn write_table<W: Serializer>(table: &[(String, Vec<String>)], w: W) -> Result<W::Ok, W::Error> {
    let mut map = w.serialize_map(Some(table.len()))?;
    for (id, coords) in table {
        map.serialize_entry(id, coords)?;
    }
    map.end()
}

/// A coordinate given either as a string or as a bare JSON number.
#[derive(Deserialize)]
#[serde(untagged)]
enum Coordinate {
    Text(String),
    Number(serde_json::Number),
}

fn read_table<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(String, Vec<String>)>, D::Error> {
    struct Table;
    impl<'de> Visitor<'de> for Table {
        type Value = Vec<(String, Vec<String>)>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an object mapping vertex ids to coordinate lists")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
            let mut out: Vec<(String, Vec<String>)> = Vec::new();
            while let Some((id, coords)) = map.next_entry::<String, Vec<Coordinate>>()? {
                if out.iter().any(|(seen, _)| *seen == id) {
                    return Err(de::Error::custom(format!("duplicate vertex `{id}`")));
                }
                let coords = coords
                    .into_iter()
                    .map(|c| match c {
                        Coordinate::Text(s) => s,
                        Coordinate::Number(n) => n.to_string(),
                    })
                    .collect();
                out.push((id, coords));
            }
            Ok(out)
        }
    }
    d.deserialize_map(Table)
}

impl ComplexFile {
    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            match msg.strip_prefix("duplicate vertex `") {
                Some(rest) => ComplexError::DuplicateVertex(rest.split('`').next().unwrap_or("").into()),
                None => ComplexError::Json(msg),
            }
        })
    }

    pub fn to_complex<S: Scalar>(&self) -> Result<Complex<S>, ComplexError> {
        let ambient = self.dim.or_else(|| self.vertices.first().map(|(_, c)| c.len())).unwrap_or(0);
        let vertices = self
            .vertices
            .iter()
            .map(|(id, coords)| {
                let point = coords
                    .iter()
                    .map(|t| {
                        S::parse_scalar(t).ok_or_else(|| ComplexError::BadCoordinate {
                            vertex: id.clone(),
                            text: t.clone(),
                        })
                    })
                    .collect::<Result<Vec<S>, _>>()?;
                Ok((id.clone(), point))
            })
            .collect::<Result<Vec<_>, ComplexError>>()?;
        Complex::build(ambient, vertices, &self.maximal)
    }
}

impl<S: Scalar> Complex<S> {
    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        ComplexFile::from_json(text)?.to_complex()
    }

    /// File form listing the maximal simplices.
    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            dim: Some(self.ambient_dim()),
            vertices: (0..self.vertex_count())
                .map(|v| {
                    let coords = self.vertex(v).iter().map(|c| c.to_string()).collect();
                    (self.vertex_ids()[v].clone(), coords)
                })
                .collect(),
            maximal: self
                .maximal_simplices()
                .into_iter()
                .map(|s| self.simplex(s).iter().map(|&v| self.vertex_ids()[v].clone()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("complex file serializes")
    }

    /// Full geometry dump: the vertex table with exact coordinates, every
    /// simplex by name, and the maximal simplices.
    pub fn geometry_json(&self) -> Value {
        let file = self.to_file();
        json!({
            "ambient_dim": self.ambient_dim(),
            "dim": self.dim(),
            "vertices": serde_json::to_value(&file).expect("serializes")["vertices"].clone(),
            "simplices": self.names(),
            "maximal": file.maximal,
        })
    }

    /// OFF mesh: vertices padded to three coordinates; each maximal simplex of
    /// dimension ≤ 2 becomes a face and each tetrahedron contributes its four
    /// triangles.
    pub fn to_off(&self) -> Result<String, ComplexError> {
        if self.ambient_dim() > 3 {
            return Err(ComplexError::AmbientTooLarge(self.ambient_dim()));
        }
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for s in self.maximal_simplices() {
            let vs = self.simplex(s);
            if vs.len() <= 3 {
                faces.push(vs.to_vec());
            } else {
                for skip in 0..vs.len() {
                    let tri: Vec<usize> = (0..vs.len()).filter(|&k| k != skip).map(|k| vs[k]).collect();
                    if !faces.contains(&tri) {
                        faces.push(tri);
                    }
                }
            }
        }
        let edges = self.simplices().iter().filter(|s| s.len() == 2).count();
        let mut out = String::from("OFF\n");
        writeln!(out, "{} {} {}", self.vertex_count(), faces.len(), edges).unwrap();
        for v in 0..self.vertex_count() {
            let mut xyz: Vec<f64> = self.vertex(v).iter().map(Scalar::approx).collect();
            xyz.resize(3, 0.0);
            writeln!(out, "{} {} {}", xyz[0], xyz[1], xyz[2]).unwrap();
        }
        for f in &faces {
            let ids: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{} {}", f.len(), ids.join(" ")).unwrap();
        }
        Ok(out)
    }
}
