"""HTTP client that reassembles a full project analysis from the service.

Used to prove CLI/service parity: the structure mirrors
:func:`shotdesk.analysis.analyze`, with every numeric leaf fetched from the
``/v1`` endpoints instead of computed locally.
"""

from __future__ import annotations

import math

import httpx

from ._version import __version__
from .analysis import EXIT_BY_STATUS, depth_json
from .comfort import Status, worst_status
from .shots import ProjectDoc, geometry_to_dict, limits_to_dict, project_to_dict


def _scene_json(shot) -> dict:
    z_near, z_far = shot.scene_range()
    return {"z_near_m": depth_json(z_near), "z_far_m": depth_json(z_far)}


def _shot_json(shot) -> dict:
    return {
        "id": shot.id,
        "shoot": geometry_to_dict(shot.shoot),
        "shift_frac": shot.shift,
        "fps": shot.fps,
        "frames": [
            {
                "min_disparity_frac": f.min_disparity,
                "max_disparity_frac": f.max_disparity,
                "left_border_min_frac": f.left_border_min,
                "right_border_min_frac": f.right_border_min,
                "subject_disparity_frac": f.subject_disparity,
            }
            for f in shot.frames
        ],
    }


def analyze_over_http(base_url: str, doc: ProjectDoc, client: httpx.Client | None = None) -> dict:
    """Recreate the analyze report through the HTTP API."""
    own = client is None
    http = client or httpx.Client(base_url=base_url, timeout=30.0)
    try:
        view = geometry_to_dict(doc.view)
        limits = limits_to_dict(doc.limits)
        statuses: list[Status] = []
        shots_out = []
        for shot in doc.shots:
            comfort = http.post(
                "/v1/assess",
                json={
                    "shoot": geometry_to_dict(shot.shoot),
                    "view": view,
                    "shift_frac": shot.shift,
                    "scene": _scene_json(shot),
                    "limits": limits,
                },
            ).json()
            window = http.post(
                "/v1/window",
                json={"view": view, "shot": _shot_json(shot), "mask": None},
            ).json()
            statuses.append(Status(comfort["worst"]))
            if window["report"]["violations"]:
                statuses.append(Status.FAIL)
            shots_out.append(
                {
                    "id": shot.id,
                    "comfort": comfort,
                    "window": window["report"],
                    "suggested_mask": window["suggested_mask"],
                }
            )

        cuts_out = []
        for cut in doc.cuts:
            outgoing = doc.shot(cut.outgoing_id)
            incoming = doc.shot(cut.incoming_id)
            response = http.post(
                "/v1/transition",
                json={
                    "d1_frac": outgoing.frames[-1].subject_disparity,
                    "d2_frac": incoming.frames[0].subject_disparity,
                    "fps": outgoing.fps,
                    "ramp_seconds": cut.ramp_seconds,
                    "validate_against": {
                        "outgoing": _shot_json(outgoing),
                        "incoming": _shot_json(incoming),
                        "view": view,
                        "limits": limits,
                    },
                },
            ).json()
            statuses.append(Status(response["report"]["worst"]))
            cuts_out.append(
                {
                    "outgoing": outgoing.id,
                    "incoming": incoming.id,
                    "plan": response["plan"],
                    "report": response["report"],
                }
            )

        worst = worst_status(statuses)
        return {
            "schema": "shotdesk/analysis-v1",
            "version": __version__,
            "view": view,
            "limits": limits,
            "shots": shots_out,
            "cuts": cuts_out,
            "worst": worst.value,
            "exit_code": EXIT_BY_STATUS[worst],
        }
    finally:
        if own:
            http.close()
