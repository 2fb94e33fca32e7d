//! Aggregate analysis of one algebra: partition, transfer data, kernel
//! filtration, homological dimensions, and self-injectivity.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::algebra::{
    findim, gldim, nakayama_check, projectivized_transfer, simples_partition, transfer_matrix,
    HomDim, SimplesPartition,
};
use crate::igusa_todorov::phidim;
use crate::linalg::kernel_filtration;
use crate::quiver::Quiver;
use crate::{Int, IntMatrix};

/// Everything the `analyze` command reports. Serialization renders integer
/// matrices as decimal strings so arbitrary-precision entries survive.
#[derive(Debug, Clone)]
pub struct AlgebraReport {
    pub name: String,
    pub vertex_count: usize,
    pub arrow_count: usize,
    pub partition: SimplesPartition,
    pub transfer: IntMatrix,
    /// Vertex names indexing the projectivized transfer matrix.
    pub non_sink_basis: Vec<String>,
    pub kernel_dims: Vec<usize>,
    pub kernel_stabilization: usize,
    pub self_injective: bool,
    /// The socle permutation as (vertex, socle vertex) pairs, when
    /// self-injective.
    pub nakayama: Option<Vec<(String, String)>>,
    pub gldim: HomDim,
    pub findim: usize,
    pub phidim: usize,
    pub warnings: Vec<String>,
}

impl AlgebraReport {
    pub fn compute(q: &Quiver) -> AlgebraReport {
        let partition = simples_partition(q);
        let transfer = transfer_matrix(q);
        let (non_sinks, tbar) = projectivized_transfer(q);
        let filtration = kernel_filtration(&tbar).expect("square");
        let (self_injective, nu) = nakayama_check(q);
        let gldim_value = gldim(q);
        let findim_value = findim(q);
        let phidim_value = phidim(q);
        assert_eq!(
            self_injective,
            phidim_value == 0,
            "self-injectivity must match phidim = 0"
        );
        assert!(findim_value <= phidim_value);
        let mut warnings = Vec::new();
        if !q.is_connected() {
            warnings.push(
                "quiver is not connected; invariants are computed for the product algebra"
                    .to_string(),
            );
        }
        AlgebraReport {
            name: q.name().to_string(),
            vertex_count: q.vertex_count(),
            arrow_count: q.arrow_count(),
            partition,
            transfer,
            non_sink_basis: non_sinks
                .iter()
                .map(|&v| q.vertex_name(v).to_string())
                .collect(),
            kernel_dims: filtration.dims.clone(),
            kernel_stabilization: filtration.stabilization_index,
            self_injective,
            nakayama: nu.map(|perm| {
                perm.iter()
                    .enumerate()
                    .map(|(v, &t)| (q.vertex_name(v).to_string(), q.vertex_name(t).to_string()))
                    .collect()
            }),
            gldim: gldim_value,
            findim: findim_value,
            phidim: phidim_value,
            warnings,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "algebra {} ({} vertices, {} arrows)\n",
            self.name, self.vertex_count, self.arrow_count
        ));
        out.push_str(&format!(
            "simples: projective {{{}}} injective {{{}}} neither {{{}}}\n",
            self.partition.projective.join(", "),
            self.partition.injective.join(", "),
            self.partition.neither.join(", ")
        ));
        out.push_str("transfer matrix:\n");
        out.push_str(&format!("{}", self.transfer));
        out.push_str(&format!(
            "kernel filtration dims {:?} (stabilizes at {})\n",
            self.kernel_dims, self.kernel_stabilization
        ));
        match &self.nakayama {
            Some(perm) => {
                let cycle: Vec<String> = perm.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                out.push_str(&format!("self-injective: yes ({})\n", cycle.join(" ")));
            }
            None => out.push_str("self-injective: no\n"),
        }
        out.push_str(&format!("gldim: {}\n", self.gldim));
        out.push_str(&format!("findim: {}\n", self.findim));
        out.push_str(&format!("phidim: {}\n", self.phidim));
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn matrix_rows_as_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Int::to_string).collect())
        .collect()
}

impl Serialize for AlgebraReport {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("AlgebraReport", 13)?;
        s.serialize_field("name", &self.name)?;
        s.serialize_field("vertices", &self.vertex_count)?;
        s.serialize_field("arrows", &self.arrow_count)?;
        s.serialize_field("partition", &self.partition)?;
        s.serialize_field("transfer", &matrix_rows_as_strings(&self.transfer))?;
        s.serialize_field("non_sink_basis", &self.non_sink_basis)?;
        s.serialize_field("kernel_dims", &self.kernel_dims)?;
        s.serialize_field("kernel_stabilization", &self.kernel_stabilization)?;
        s.serialize_field("self_injective", &self.self_injective)?;
        s.serialize_field("nakayama", &self.nakayama)?;
        s.serialize_field("gldim", &self.gldim)?;
        s.serialize_field("findim", &self.findim)?;
        s.serialize_field("phidim", &self.phidim)?;
        s.end()
    }
}
