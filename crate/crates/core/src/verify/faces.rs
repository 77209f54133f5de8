use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{check_scale, render_point, Check, VerificationReport, Witness};
use crate::geometry::{enumerate_vertices_with, point_in_hull, ConvexHull};
use crate::par::Exec;
use crate::rational::{int, pretty};
use crate::sos2::{build_for_pwl, sos2_family, FormulationFragment, Method, UnivariatePwl};
use crate::{Error, Rational, Result};

/// Largest number of binary aux variables whose full cube is scanned.
pub const MAX_REDUNDANT_LEVELS: usize = 12;
const MAX_CODES: usize = 1 << 12;

/// Which coordinates of a face are compared against the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceImage {
    /// The λ block.
    Lambda,
    /// The `(x, z)` pair of an `(x, z)`-space method.
    Xz,
}

/// The face of one aux assignment, as the extreme points of its image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRecord {
    pub code: Vec<i64>,
    #[serde(serialize_with = "serialize_points")]
    pub extreme: Vec<Vec<Rational>>,
}

fn serialize_points<S: serde::Serializer>(
    pts: &[Vec<Rational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(pts.iter().map(|p| render_point(p)))
}

impl FaceRecord {
    pub fn is_empty(&self) -> bool {
        self.extreme.is_empty()
    }

    /// The λ indices (1-based) when every extreme point is a unit vector.
    pub fn support(&self) -> Option<BTreeSet<usize>> {
        face_support(&self.extreme)
    }
}

/// `Some(S)` when every point is a unit vector, with `S` their 1-based
/// positions.
pub fn face_support(points: &[Vec<Rational>]) -> Option<BTreeSet<usize>> {
    points
        .iter()
        .map(|p| {
            let mut nz = p.iter().enumerate().filter(|(_, x)| !x.is_zero());
            match (nz.next(), nz.next()) {
                (Some((i, x)), None) if x.is_one() => Some(i + 1),
                _ => None,
            }
        })
        .collect()
}

fn image_of(frag: &FormulationFragment, image: FaceImage, v: &[Rational]) -> Result<Vec<Rational>> {
    match image {
        FaceImage::Lambda => Ok(v[..frag.lambda_count()].to_vec()),
        FaceImage::Xz => {
            let (x, z) = frag
                .xz()
                .ok_or_else(|| Error::Unsupported("fragment has no (x, z) variables".into()))?;
            Ok(vec![v[x].clone(), v[z].clone()])
        }
    }
}

fn face_image(
    frag: &FormulationFragment,
    code: &[i64],
    image: FaceImage,
) -> Result<Vec<Vec<Rational>>> {
    let verts = match enumerate_vertices_with(&frag.face_polytope(code)?, Exec::Sequential) {
        Ok(v) => v,
        Err(Error::Empty) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut imgs = verts
        .iter()
        .map(|v| image_of(frag, image, v))
        .collect::<Result<Vec<_>>>()?;
    imgs.sort();
    imgs.dedup();
    let mut ext = ConvexHull::new(&imgs)?.extreme_points();
    ext.sort();
    Ok(ext)
}

/// Extreme points of the λ-projection of the face where the aux variables
/// equal `code`. An infeasible code gives [`Error::Empty`].
pub fn faces_by_code(frag: &FormulationFragment, code: &[i64]) -> Result<Vec<Vec<Rational>>> {
    check_scale(frag)?;
    let face = face_image(frag, code, FaceImage::Lambda)?;
    if face.is_empty() {
        return Err(Error::Empty);
    }
    Ok(face)
}

fn all_faces(frag: &FormulationFragment, image: FaceImage, exec: Exec) -> Result<Vec<FaceRecord>> {
    check_scale(frag)?;
    let codes = frag.aux_assignments();
    if codes.len() > MAX_CODES {
        return Err(Error::ScaleLimit(format!(
            "{} aux assignments; face checks support at most {MAX_CODES}",
            codes.len()
        )));
    }
    exec.map(&codes, |c| {
        Ok(FaceRecord {
            code: c.clone(),
            extreme: face_image(frag, c, image)?,
        })
    })
    .into_iter()
    .collect()
}

fn render_set(points: &[Vec<Rational>], image: FaceImage) -> Vec<String> {
    match (image, face_support(points)) {
        (FaceImage::Lambda, Some(s)) => s.iter().map(|v| format!("lam_{v}")).collect(),
        _ => points
            .iter()
            .map(|p| format!("({})", p.iter().map(pretty).collect::<Vec<_>>().join(", ")))
            .collect(),
    }
}

fn sorted(mut s: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    s.sort();
    s.dedup();
    s
}

fn within(face: &[Vec<Rational>], member: &[Vec<Rational>]) -> Result<bool> {
    for p in face {
        if !point_in_hull(member, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn first_outside(
    faces: &[FaceRecord],
    family: &[Vec<Vec<Rational>>],
    image: FaceImage,
) -> Result<Option<Witness>> {
    for f in faces.iter().filter(|f| !f.is_empty()) {
        let mut inside = false;
        for m in family {
            if within(&f.extreme, m)? {
                inside = true;
                break;
            }
        }
        if !inside {
            return Ok(Some(Witness::FaceMismatch {
                code: f.code.clone(),
                found: Some(render_set(&f.extreme, image)),
                expected: None,
            }));
        }
    }
    Ok(None)
}

/// Checks that the faces over all aux assignments realize `family` exactly:
/// every nonempty face lies in some member, and every member (given by its
/// extreme points) is some face.
pub fn check_disjunctive_faces(
    frag: &FormulationFragment,
    family: &[Vec<Vec<Rational>>],
    image: FaceImage,
) -> Result<Check> {
    check_disjunctive_faces_with(frag, family, image, Exec::default())
}

pub fn check_disjunctive_faces_with(
    frag: &FormulationFragment,
    family: &[Vec<Vec<Rational>>],
    image: FaceImage,
    exec: Exec,
) -> Result<Check> {
    let name = "faces";
    let faces = all_faces(frag, image, exec)?;
    if let Some(w) = first_outside(&faces, family, image)? {
        return Ok(Check::fail(name, w));
    }
    for m in family {
        let m = sorted(m.clone());
        if !faces.iter().any(|f| f.extreme == m) {
            return Ok(Check::fail(
                name,
                Witness::UnmatchedSet(render_set(&m, image)),
            ));
        }
    }
    Ok(Check::pass(name))
}

pub(crate) fn unit(n: usize, v: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    e[v - 1] = Rational::one();
    e
}

/// A family of λ supports (1-based) as point sets.
pub fn lambda_family(n: usize, family: &[BTreeSet<usize>]) -> Vec<Vec<Vec<Rational>>> {
    family
        .iter()
        .map(|s| s.iter().map(|&v| unit(n, v)).collect())
        .collect()
}

/// The function used to check `(x, z)`-space methods: `t_v = v − 1`,
/// `f(t) = t²`, so consecutive pieces are never collinear.
pub fn validity_sample(d: usize) -> Result<UnivariatePwl> {
    let t: Vec<i64> = (0..=d as i64).collect();
    let f: Vec<i64> = t.iter().map(|x| x * x).collect();
    UnivariatePwl::from_ints(&t, &f)
}

/// Faces of `method` on `d` pieces reproduce the SOS2 family: in λ space
/// for λ methods, as graph segments for `mc` and `inc`.
pub fn check_sos2_validity(method: Method, d: usize) -> Result<Check> {
    let pwl = validity_sample(d)?;
    let frag = build_for_pwl(method, &pwl)?;
    let check = if method.is_lambda() {
        check_disjunctive_faces(
            &frag,
            &lambda_family(d + 1, &sos2_family(d)),
            FaceImage::Lambda,
        )?
    } else {
        let (t, f) = (pwl.breakpoints(), pwl.values());
        let pt = |i: usize| vec![t[i].clone(), f[i].clone()];
        let family: Vec<Vec<Vec<Rational>>> = (0..d).map(|i| vec![pt(i), pt(i + 1)]).collect();
        check_disjunctive_faces(&frag, &family, FaceImage::Xz)?
    };
    Ok(Check {
        name: format!("sos2-validity {method} d={d}"),
        ..check
    })
}

/// Faces of every binary aux assignment of an independent-branching style
/// formulation, compared against a family with one designated code per set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub faces: Vec<FaceRecord>,
    /// Codes with a nonempty face.
    pub proj_y: Vec<Vec<i64>>,
    pub checks: VerificationReport,
}

impl RedundancyReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }

    pub fn face(&self, code: &[i64]) -> Option<&FaceRecord> {
        self.faces.iter().find(|f| f.code == code)
    }

    /// True iff every binary vector of the aux length has a nonempty face.
    pub fn proj_is_full_cube(&self) -> bool {
        let l = self.faces.first().map_or(0, |f| f.code.len());
        self.proj_y.len() == 1 << l
    }
}

/// Checks `family[j]` (λ supports, 1-based) against the face at `codes[j]`,
/// and that no face escapes the family.
pub fn check_redundant_embedding(
    frag: &FormulationFragment,
    family: &[BTreeSet<usize>],
    codes: &[Vec<i64>],
) -> Result<RedundancyReport> {
    if family.len() != codes.len() {
        return Err(Error::DimensionMismatch {
            expected: family.len(),
            found: codes.len(),
        });
    }
    let l = frag.aux().len();
    if l > MAX_REDUNDANT_LEVELS {
        return Err(Error::ScaleLimit(format!(
            "{l} aux variables; redundancy checks support at most {MAX_REDUNDANT_LEVELS}"
        )));
    }
    if frag
        .aux()
        .iter()
        .any(|a| a.lower != int(0) || a.upper != int(1))
    {
        return Err(Error::Unsupported(
            "redundancy checks need binary aux variables".into(),
        ));
    }
    let faces = all_faces(frag, FaceImage::Lambda, Exec::default())?;
    let proj_y: Vec<Vec<i64>> = faces
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| f.code.clone())
        .collect();
    let points = lambda_family(frag.lambda_count(), family);

    let mut checks = VerificationReport::default();
    let outside = first_outside(&faces, &points, FaceImage::Lambda)?;
    checks.push(match outside {
        None => Check::pass("faces within family"),
        Some(w) => Check::fail("faces within family", w),
    });

    let mut mismatch = None;
    for (code, member) in codes.iter().zip(&points) {
        let face = faces
            .iter()
            .find(|f| &f.code == code)
            .ok_or(Error::DimensionMismatch {
                expected: l,
                found: code.len(),
            })?;
        let want = sorted(member.clone());
        if face.extreme != want {
            mismatch = Some(Witness::FaceMismatch {
                code: code.clone(),
                found: (!face.is_empty()).then(|| render_set(&face.extreme, FaceImage::Lambda)),
                expected: Some(render_set(&want, FaceImage::Lambda)),
            });
            break;
        }
    }
    checks.push(match mismatch {
        None => Check::pass("family realized at codes"),
        Some(w) => Check::fail("family realized at codes", w),
    });
    Ok(RedundancyReport {
        faces,
        proj_y,
        checks,
    })
}
