"""Self-describing JSON bundles for generated designs.

A bundle stores the design matrices as exact integer row arrays (no floats),
the certificate arrays when present, the verification summary it was saved
with, and enough metadata to regenerate it: method, parameters, seed, a
digest of the permutation plan, and the tool version.  Loading re-verifies;
a bundle whose stored summary disagrees with re-verification is rejected.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .design import CoupledDesign, DesignWitness, PermutationPlan
from .errors import ParseError
from .verify import VerificationReport, full_report

FORMAT = "dcd-bundle/1"


def _plan_payload(plan: PermutationPlan | None):
    if plan is None:
        return None
    payload = {"seed": plan.seed}
    if plan.v is not None:
        payload["v"] = [np.asarray(p).tolist() for p in plan.v]
    if plan.w is not None:
        payload["w"] = [
            [np.asarray(p).tolist() for p in entry] if isinstance(entry, (list, tuple)) else np.asarray(entry).tolist()
            for entry in plan.w
        ]
    if plan.b_cells is not None:
        payload["b_cells"] = np.asarray(plan.b_cells).tolist()
    if plan.c_perms is not None:
        payload["c_perms"] = [np.asarray(p).tolist() for p in plan.c_perms]
    return payload


def plan_digest(plan: PermutationPlan | None) -> str:
    canonical = json.dumps(_plan_payload(plan), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


def report_summary(report: VerificationReport) -> dict:
    return {
        "passed": report.passed,
        "omega": report.omega_checked,
        "d1_is_oa": report.d1_is_oa,
        "d2_is_lh": report.d2_is_lh,
        "condition_a": report.condition_a,
        "condition_b": report.condition_b,
        "croa_partition": report.croa_partition,
        "witness_check": report.witness_check,
    }


def design_to_bundle(
    design: CoupledDesign,
    report: VerificationReport,
    method: str,
    parameters: dict,
    seed: int,
    extra: dict | None = None,
) -> dict:
    metadata = {
        "method": method,
        "parameters": parameters,
        "seed": seed,
        "plan_digest": plan_digest(design.witness.plan if design.witness else None),
        "tool_version": __version__,
    }
    if extra:
        metadata.update(extra)
    bundle = {
        "format": FORMAT,
        "metadata": metadata,
        "s": design.s,
        "d1": design.d1.tolist(),
        "d2": design.d2.tolist(),
        "witness": None,
        "report": report_summary(report),
    }
    if design.witness is not None:
        bundle["witness"] = {"b": design.witness.b.tolist(), "c": design.witness.c.tolist()}
    return bundle


def save_bundle(bundle: dict, path) -> None:
    Path(path).write_text(json.dumps(bundle, indent=2, sort_keys=True) + "\n")


def parse_bundle(data: dict) -> tuple[CoupledDesign, dict]:
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise ParseError(f"not a {FORMAT} bundle")
    try:
        s = int(data["s"])
        d1 = np.array(data["d1"], dtype=int)
        d2 = np.array(data["d2"], dtype=int)
        witness = None
        if data.get("witness"):
            witness = DesignWitness(
                b=np.array(data["witness"]["b"], dtype=int),
                c=np.array(data["witness"]["c"], dtype=int),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed bundle: {exc}") from exc
    if d1.ndim != 2 or d2.ndim != 2 or d1.shape[0] != d2.shape[0]:
        raise ParseError("bundle matrices have inconsistent shapes")
    return CoupledDesign(d1=d1, d2=d2, s=s, witness=witness), data


def load_bundle(path, verify: bool = True) -> tuple[CoupledDesign, dict]:
    """Read a bundle; with verify=True, re-run verification at the stored
    omega and require agreement with the stored summary."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    design, data = parse_bundle(data)
    if verify:
        stored = data.get("report", {})
        omega = stored.get("omega")
        omega = 2 if omega is None else int(omega)
        fresh = report_summary(full_report(design, omega=omega))
        for key in ("passed", "condition_a", "condition_b", "d2_is_lh"):
            if key in stored and stored[key] is not None and stored[key] != fresh[key]:
                raise ParseError(f"{path}: stored report disagrees with re-verification on {key!r}")
    return design, data
