"""Published reference series for the comparison report.

The embedded data points are taken verbatim from the publication this
implementation reproduces: average decoding time-steps versus SNR for the
proposed syndrome-check decoders on P(128,64) (5G construction, SC based and
SCL based with L=8) and on the length-128 rate-1/2 Reed-Muller code (L=32),
the constant latencies of the fast SC/SCL decoders they are compared against,
and the quoted FER operating points at 4 dB. Labels follow the source's
figure numbering (fig5/fig6/fig7).
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceCurve:
    """A labeled (snr_db, value) series; snr values strictly increasing."""

    label: str
    field: str  # SweepPoint field the series compares against
    points: tuple

    def value_at(self, snr_db: float) -> float:
        """Linear interpolation, clamped at the endpoints."""
        pts = self.points
        if snr_db <= pts[0][0]:
            return pts[0][1]
        if snr_db >= pts[-1][0]:
            return pts[-1][1]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 <= snr_db <= x1:
                t = (snr_db - x0) / (x1 - x0)
                return y0 + t * (y1 - y0)
        raise AssertionError("unreachable")


_FIG5_PROPOSED = (
    (-3, 97.80), (-2, 97.13), (-1, 94.68), (0, 88.88), (1, 78.09),
    (2, 63.81), (3, 49.87), (4, 37.13), (5, 25.98), (6, 16.52),
    (7, 9.74), (8, 5.07), (9, 2.15), (10, 0.68),
)

_FIG6_PROPOSED = (
    (-3, 197.00), (-2, 195.83), (-1, 192.39), (0, 182.71), (1, 164.27),
    (2, 140.40), (3, 113.17), (4, 82.320), (5, 52.460), (6, 28.590),
    (7, 14.090), (8, 6.2700), (9, 2.2800), (10, 0.6900),
)

_FIG7_PROPOSED = (
    (-3, 244.39), (-2, 242.99), (-1, 236.79), (0, 219.77), (1, 191.72),
    (2, 162.85), (3, 134.82), (4, 103.53), (5, 69.610), (6, 38.330),
    (7, 17.890), (8, 7.5500), (9, 2.5100), (10, 0.7300),
)


def _const(label, value, field="avg_time_steps"):
    return ReferenceCurve(label, field, ((-3, float(value)), (10, float(value))))


REFERENCES = {
    "fig5-proposed": ReferenceCurve("fig5-proposed", "avg_time_steps", _FIG5_PROPOSED),
    "fig6-proposed": ReferenceCurve("fig6-proposed", "avg_time_steps", _FIG6_PROPOSED),
    "fig7-proposed": ReferenceCurve("fig7-proposed", "avg_time_steps", _FIG7_PROPOSED),
    "fig5-fast-sc-1": _const("fig5-fast-sc-1", 86),
    "fig5-fast-sc-2": _const("fig5-fast-sc-2", 42),
    "fig5-fast-sc-3": _const("fig5-fast-sc-3", 16),
    "fig6-fast-scl-1": _const("fig6-fast-scl-1", 105),
    "fig6-fast-scl-2": _const("fig6-fast-scl-2", 94),
    "fig6-fast-scl-3": _const("fig6-fast-scl-3", 43),
    "fig7-fast-scl-1": _const("fig7-fast-scl-1", 112),
    "fig7-fast-scl-2": _const("fig7-fast-scl-2", 112),
    "fig7-fast-scl-3": _const("fig7-fast-scl-3", 76),
    "fig5-fer-4db": ReferenceCurve("fig5-fer-4db", "fer", ((4, 1.6e-3),)),
    "fig6-fer-4db": ReferenceCurve("fig6-fer-4db", "fer", ((4, 1.1e-3),)),
    "fig7-fer-4db": ReferenceCurve("fig7-fer-4db", "fer", ((4, 2.3e-5),)),
}


def get_reference(label: str) -> ReferenceCurve:
    try:
        return REFERENCES[label]
    except KeyError:
        raise KeyError(
            f"unknown reference {label!r}; available: {', '.join(sorted(REFERENCES))}"
        ) from None
