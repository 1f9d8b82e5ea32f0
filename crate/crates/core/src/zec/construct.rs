use std::collections::HashMap;

use super::code::{StagedDecoder, ZeCode, ZeDecoder};
use super::ZecError;
use crate::mac::{extend_joint, names, x_block_vars, y_block_vars, InputProcess, MacSpec};
use crate::uv::{JointRange, Symbol, Tuple};

/// A code built from an input process, with the partition data it came from.
#[derive(Debug, Clone)]
pub struct ConstructedCode {
    pub code: ZeCode,
    /// Block counts `|⟦U|Y⟧*|` followed by `min_u |⟦Xʲ|Y,u⟧*|` per user.
    pub block_counts: Vec<usize>,
    /// `I*[U;Y]` followed by `I*[Xʲ;Y|U]` per user, in bits.
    pub info: Vec<f64>,
}

fn with_constant_u(p: &InputProcess) -> Result<InputProcess, ZecError> {
    if p.has_u {
        return Ok(p.clone());
    }
    let mut variables = vec!["U".to_owned()];
    variables.extend(p.joint.variables().iter().cloned());
    let mut alphabets = vec![[Symbol::Int(0)].into_iter().collect()];
    alphabets.extend(p.joint.alphabets().iter().cloned());
    let support = p.joint.support().iter().map(|t| {
        let mut row = vec![Symbol::Int(0)];
        row.extend(t.iter().cloned());
        row
    });
    let joint = JointRange::new(variables, alphabets, support)?;
    Ok(InputProcess {
        n: p.n,
        joint,
        has_u: true,
    })
}

fn pack_symbols(mac: &MacSpec, y: &Tuple) -> Result<u64, ZecError> {
    let idx = y
        .iter()
        .map(|s| mac.output_index(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mac.pack_output(&idx))
}

/// Builds a zero-error code from an input process satisfying the two
/// structural conditions: user blocks conditionally unrelated given `U`, and
/// `U ↔ X ↔ Y` a Markov chain in the channel extension.
///
/// One representative `u` (the smallest) is taken from every block of
/// `⟦U|Y⟧*`. Within the slice of each representative, one codeword (the
/// smallest member) is taken from each of the first `w_maxʲ` blocks of
/// `⟦Xʲ|Y,u⟧*`, where `w_maxʲ` is the least block count over all `u`.
pub fn construct_code(p: &InputProcess, mac: &MacSpec) -> Result<ConstructedCode, ZecError> {
    let p = with_constant_u(p)?;
    let n = p.n;
    let m = mac.users();
    if !p.inputs_conditionally_unrelated(m)? {
        return Err(ZecError::Precondition(
            "condition (i): user inputs are not conditionally unrelated given U".into(),
        ));
    }
    let joint = extend_joint(mac, &p)?;
    let x_blocks: Vec<Vec<String>> = (1..=m).map(|j| x_block_vars(j, n)).collect();
    let all_x: Vec<String> = x_blocks.iter().flatten().cloned().collect();
    let ys = y_block_vars(n);
    let y_names = names(&ys);
    if !joint.is_markov(&["U"], &names(&all_x), &y_names)? {
        return Err(ZecError::Precondition(
            "condition (ii): U, X, Y do not form a Markov uncertainty chain".into(),
        ));
    }

    let u_cv = joint.maximal_common_variable(&["U"], &y_names)?;
    let u_family = joint.conditional_family(&["U"], &y_names)?;
    let u_partition = u_family.overlap_partition();
    let w0 = u_partition.len();
    let reps: Vec<Tuple> = u_partition
        .blocks()
        .iter()
        .map(|b| b.first().expect("blocks are nonempty").clone())
        .collect();

    let mut block_counts = vec![w0];
    for xb in &x_blocks {
        block_counts.push(joint.conditional_block_count(&names(xb), &y_names, &["U"])?);
    }

    let mut stage1 = HashMap::new();
    for (y, &label) in &u_cv.label_of_y {
        stage1.insert(pack_symbols(mac, y)?, label + 1);
    }

    let mut encoders: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m];
    let mut stage2: Vec<Vec<HashMap<u64, usize>>> = vec![Vec::new(); m];
    for u in &reps {
        let slice = joint
            .restrict(&["U"], u)?
            .ok_or_else(|| ZecError::Internal("representative has an empty slice".into()))?;
        for (j, xb) in x_blocks.iter().enumerate() {
            let wj = block_counts[j + 1];
            let cv = slice.maximal_common_variable(&names(xb), &y_names)?;
            let partition = slice.conditional_family(&names(xb), &y_names)?.overlap_partition();
            if partition.len() < wj {
                return Err(ZecError::Internal(format!(
                    "slice {u:?} has {} selectable codewords for user {}, need {wj}",
                    partition.len(),
                    j + 1
                )));
            }
            for block in partition.blocks().iter().take(wj) {
                let x = block.first().expect("blocks are nonempty");
                let cw = x
                    .iter()
                    .map(|s| mac.input_index(j, s))
                    .collect::<Result<Vec<_>, _>>()?;
                encoders[j].push(cw);
            }
            let mut map = HashMap::new();
            for (y, &label) in &cv.label_of_y {
                if label < wj {
                    map.insert(pack_symbols(mac, y)?, label + 1);
                }
            }
            stage2[j].push(map);
        }
    }

    let mut cardinalities = vec![w0];
    cardinalities.extend_from_slice(&block_counts[1..]);
    let code = ZeCode::new(n, cardinalities, encoders, mac.fingerprint())?.with_staged(StagedDecoder {
        stage1,
        stage2,
    });
    // Building the decoder inverts the code and cross-checks the staged rule.
    ZeDecoder::new(&code, mac)?;
    let info = block_counts.iter().map(|&c| (c as f64).log2()).collect();
    Ok(ConstructedCode {
        code,
        block_counts,
        info,
    })
}
