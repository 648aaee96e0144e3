use num_complex::Complex64 as C64;

use super::{check_nodes, epsilon, AmplitudeError, AmplitudeResult, Endpoint, SpinNetworkGraph, NODES, SLOTS};
use crate::exec::Execution;
use crate::spin::StateVector;

/// Bit of `index` at position `pos` of a `width`-bit big-endian register.
#[inline]
fn bit(index: usize, pos: usize, width: usize) -> usize {
    (index >> (width - 1 - pos)) & 1
}

/// A link closed while absorbing a node.
struct Closure {
    /// Position of the partner endpoint in the open list.
    open_pos: usize,
    slot: usize,
    /// True when the absorbed node holds the link's first endpoint.
    node_is_first: bool,
}

/// Contracts the network node by node.
///
/// Nodes are absorbed in order `0..5`; absorbing a node closes every link to
/// an already absorbed node (in slot order) and leaves its other slots open.
/// Open indices never exceed six qubits on K5.
pub fn vertex_amplitude(nodes: &[StateVector], graph: &SpinNetworkGraph) -> Result<AmplitudeResult, AmplitudeError> {
    check_nodes(nodes)?;
    Ok(AmplitudeResult::from_value(contract_sequential(nodes, graph)))
}

pub(crate) fn contract_sequential(nodes: &[StateVector], graph: &SpinNetworkGraph) -> C64 {
    let mut open: Vec<Endpoint> = Vec::new();
    let mut tensor = vec![C64::new(1.0, 0.0)];

    for (node, state) in nodes.iter().enumerate().take(NODES) {
        let mut closures = Vec::new();
        let mut new_open_slots = Vec::new();
        for slot in 0..SLOTS {
            let here = Endpoint::new(node, slot);
            let there = graph.partner(here);
            if there.node < node {
                let open_pos = open.iter().position(|e| *e == there).expect("absorbed endpoints stay open until closed");
                let (_, node_is_first) = graph.link_at(here);
                closures.push(Closure { open_pos, slot, node_is_first });
            } else {
                new_open_slots.push(slot);
            }
        }

        let width = open.len();
        let kept: Vec<usize> = (0..width).filter(|p| !closures.iter().any(|c| c.open_pos == *p)).collect();
        let out_width = kept.len() + new_open_slots.len();
        let mut out = vec![C64::new(0.0, 0.0); 1 << out_width];
        let amps = state.amplitudes();

        for (i, &t) in tensor.iter().enumerate() {
            if t == C64::new(0.0, 0.0) {
                continue;
            }
            let mut kept_index = 0usize;
            for &p in &kept {
                kept_index = (kept_index << 1) | bit(i, p, width);
            }
            for (j, &v) in amps.iter().enumerate() {
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut w = 1.0;
                for c in &closures {
                    let x = bit(i, c.open_pos, width);
                    let y = bit(j, c.slot, SLOTS);
                    w *= if c.node_is_first { epsilon(y, x) } else { epsilon(x, y) };
                    if w == 0.0 {
                        break;
                    }
                }
                if w == 0.0 {
                    continue;
                }
                let mut idx = kept_index;
                for &s in &new_open_slots {
                    idx = (idx << 1) | bit(j, s, SLOTS);
                }
                out[idx] += t * v * w;
            }
        }

        open = kept
            .iter()
            .map(|&p| open[p])
            .chain(new_open_slots.iter().map(|&s| Endpoint::new(node, s)))
            .collect();
        tensor = out;
    }
    debug_assert!(open.is_empty());
    tensor[0]
}

/// Reference oracle: builds the full 20-qubit product and applies the ten
/// singlet projections link by link.
pub fn vertex_amplitude_bruteforce(nodes: &[StateVector], graph: &SpinNetworkGraph) -> Result<AmplitudeResult, AmplitudeError> {
    vertex_amplitude_bruteforce_with(nodes, graph, Execution::default())
}

pub fn vertex_amplitude_bruteforce_with(
    nodes: &[StateVector],
    graph: &SpinNetworkGraph,
    exec: Execution,
) -> Result<AmplitudeResult, AmplitudeError> {
    check_nodes(nodes)?;
    let total = NODES * SLOTS;
    let mut psi = vec![C64::new(0.0, 0.0); 1 << total];
    exec.fill(&mut psi, |index| {
        let mut amp = C64::new(1.0, 0.0);
        for (n, state) in nodes.iter().enumerate() {
            let local = (index >> ((NODES - 1 - n) * SLOTS)) & 0xF;
            amp *= state.amplitude(local);
        }
        amp
    });

    // qubit labels of the remaining register, most significant first
    let mut labels: Vec<usize> = (0..total).collect();
    for link in graph.links() {
        let pa = labels.iter().position(|&q| q == link.first.qubit()).expect("qubit present");
        let pb = labels.iter().position(|&q| q == link.second.qubit()).expect("qubit present");
        psi = project_singlet(&psi, labels.len(), pa, pb, exec);
        labels.retain(|&q| q != link.first.qubit() && q != link.second.qubit());
    }
    debug_assert_eq!(psi.len(), 1);
    Ok(AmplitudeResult::from_value(psi[0]))
}

/// Applies `⟨ε|` to positions `pa` (first factor) and `pb` of a
/// `width`-qubit vector.
fn project_singlet(psi: &[C64], width: usize, pa: usize, pb: usize, exec: Execution) -> Vec<C64> {
    let shift_a = width - 1 - pa;
    let shift_b = width - 1 - pb;
    let (hi, lo) = (shift_a.max(shift_b), shift_a.min(shift_b));
    let mut out = vec![C64::new(0.0, 0.0); 1 << (width - 2)];
    exec.fill(&mut out, |r| {
        // re-insert two zero bits at positions lo and hi
        let low = r & ((1 << lo) - 1);
        let mid = (r >> lo) & ((1 << (hi - lo - 1)) - 1);
        let high = r >> (hi - 1);
        let base = (high << (hi + 1)) | (mid << (lo + 1)) | low;
        let mut acc = C64::new(0.0, 0.0);
        for (x, y) in [(0usize, 1usize), (1, 0)] {
            let idx = base | (x << shift_a) | (y << shift_b);
            acc += psi[idx] * epsilon(x, y);
        }
        acc
    });
    out
}
