"""JSON documents for construction states and certificates."""
from __future__ import annotations

from src.construction.certify import Certificate
from src.construction.checker import VerificationReport
from src.construction.schedule import ScheduleConfig
from src.construction.state import ConstructionState
from src.decomposition.codec import decomposition_from_document, decomposition_to_document
from src.decomposition.decomposition import MultiplierDecomposition
from src.jsonio import decode_int, decode_matrix, encode_int, encode_matrix
from src.schatten.norms import SchattenMatrix
from src.schema import require_valid

SCHEMA_VERSION = 1


def state_to_document(D: MultiplierDecomposition, state: ConstructionState, verification: dict | None = None) -> dict:
    config = state.config
    document = {
        "schema_version": SCHEMA_VERSION,
        "schedule": {
            "eta": config.eta,
            "epsilon1": config.epsilon1,
            "steps": config.steps,
            "mode": config.mode,
            "search_cap": config.search_cap,
        },
        "level": state.level,
        "alpha": [encode_int(a) for a in state.alpha],
        "beta": [encode_int(b) for b in state.beta],
        "mask_intervals": [[lo, hi] for lo, hi in state.mask],
        "epsilons": [float(e) for e in state.epsilons],
        "measured": [float(m) for m in state.measured],
        "decomposition": decomposition_to_document(D),
    }
    if verification is not None:
        document["verification"] = verification
    return require_valid("construction_state", document)


def state_from_document(document: dict) -> tuple[MultiplierDecomposition, ConstructionState]:
    require_valid("construction_state", document)
    s = document["schedule"]
    config = ScheduleConfig(eta=s["eta"], steps=s["steps"], mode=s["mode"],
                            epsilon1=s["epsilon1"], search_cap=s["search_cap"])
    state = ConstructionState(
        alpha=tuple(decode_int(a) for a in document["alpha"]),
        beta=tuple(decode_int(b) for b in document["beta"]),
        mask=tuple((lo, hi) for lo, hi in document["mask_intervals"]),
        epsilons=tuple(document["epsilons"]),
        measured=tuple(document["measured"]),
        config=config,
    )
    return decomposition_from_document(document["decomposition"]), state


def certificate_to_document(certificate: Certificate) -> dict:
    """Fields in the fixed order d, epsilon, A, B, slack, C_lb, alpha, beta, mask_intervals, witness."""
    document = {
        "d": certificate.d,
        "epsilon": certificate.epsilon,
        "A": certificate.A,
        "B": certificate.B,
        "slack": certificate.slack,
        "C_lb": certificate.C_lb,
        "alpha": [encode_int(a) for a in certificate.alpha],
        "beta": [encode_int(b) for b in certificate.beta],
        "mask_intervals": [[lo, hi] for lo, hi in certificate.mask_intervals],
        "witness": encode_matrix(certificate.witness.entries),
        "witness_tag": certificate.witness_tag,
        "degenerate": certificate.degenerate,
    }
    return require_valid("certificate", document)


def certificate_from_document(document: dict) -> Certificate:
    require_valid("certificate", document)
    return Certificate(
        d=document["d"],
        epsilon=document["epsilon"],
        A=document["A"],
        B=document["B"],
        slack=document["slack"],
        C_lb=document["C_lb"],
        alpha=tuple(decode_int(a) for a in document["alpha"]),
        beta=tuple(decode_int(b) for b in document["beta"]),
        mask_intervals=tuple((lo, hi) for lo, hi in document["mask_intervals"]),
        witness=SchattenMatrix(decode_matrix(document["witness"])),
        witness_tag=document.get("witness_tag", ""),
    )


def report_to_document(report: VerificationReport) -> dict:
    return {
        "ok": report.ok,
        "schedule_ok": report.schedule_ok,
        "mask_ok": report.mask_ok,
        "max_residual": report.max_residual,
        "levels": [
            {"level": r.level, "epsilon": r.epsilon, "max_i": r.max_i, "max_ii": r.max_ii, "ok": r.ok}
            for r in report.levels
        ],
        "problems": list(report.problems),
    }
