//! Line-record scene export (OBJ and PLY).

use quadsec::Point3;

#[derive(Default)]
pub struct Scene {
    vertices: Vec<Point3>,
    /// Named polylines as vertex indices; closed ones repeat the first index.
    groups: Vec<(String, Vec<Vec<usize>>)>,
}

impl Scene {
    pub fn add(&mut self, group: &str, pts: &[Point3], closed: bool) {
        let start = self.vertices.len();
        self.vertices.extend_from_slice(pts);
        let mut idx: Vec<usize> = (start..start + pts.len()).collect();
        if closed && !idx.is_empty() {
            idx.push(start);
        }
        match self.groups.iter_mut().find(|(g, _)| g == group) {
            Some((_, lines)) => lines.push(idx),
            None => self.groups.push((group.to_string(), vec![idx])),
        }
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::from("# quadsec scene\n");
        for v in &self.vertices {
            s.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
        }
        for (g, lines) in &self.groups {
            s.push_str(&format!("g {g}\n"));
            for l in lines {
                s.push('l');
                for i in l {
                    s.push_str(&format!(" {}", i + 1));
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn to_ply(&self) -> String {
        let edges: Vec<(usize, usize)> =
            self.groups.iter().flat_map(|(_, ls)| ls.iter()).flat_map(|l| l.windows(2).map(|w| (w[0], w[1]))).collect();
        let mut s = format!(
            "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\n\
             element edge {}\nproperty int vertex1\nproperty int vertex2\nend_header\n",
            self.vertices.len(),
            edges.len()
        );
        for v in &self.vertices {
            s.push_str(&format!("{} {} {}\n", v.x, v.y, v.z));
        }
        for (a, b) in edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}
