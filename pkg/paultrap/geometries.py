"""Builders for common electrode layouts."""
from __future__ import annotations

from .fields import ElectrodeRole, PlanarElectrode, PlanarTrapModel, Rect


def five_wire(drive, *, center_width=50e-6, rail_width=100e-6, outer_width=400e-6,
              length=4e-3, segments=5, segment_width=100e-6, dc_voltages=None):
    """
    Symmetric five-wire surface trap along x: a center DC strip, two RF
    rails (one RF electrode), and ``segments`` DC segments on each outer
    side, labelled ``t1..tN`` (y > 0) and ``b1..bN`` (y < 0) from -x to +x.
    """
    half_c = center_width / 2.0
    half_l = length / 2.0
    electrodes = [
        PlanarElectrode('center', ElectrodeRole.DC, (Rect(-half_l, -half_c, half_l, half_c),)),
        PlanarElectrode('rf', ElectrodeRole.RF, (
            Rect(-half_l, half_c, half_l, half_c + rail_width),
            Rect(-half_l, -half_c - rail_width, half_l, -half_c),
        )),
    ]
    y_in = half_c + rail_width
    y_out = y_in + outer_width
    x0 = -segments * segment_width / 2.0
    for i in range(segments):
        x1 = x0 + i * segment_width
        x2 = x1 + segment_width
        electrodes.append(PlanarElectrode(f't{i + 1}', ElectrodeRole.DC, (Rect(x1, y_in, x2, y_out),)))
        electrodes.append(PlanarElectrode(f'b{i + 1}', ElectrodeRole.DC, (Rect(x1, -y_out, x2, -y_in),)))
    return PlanarTrapModel(electrodes, drive, dc_voltages)


def mirrored_channels(model):
    """Channel map tying each ``tN`` segment to its ``bN`` partner."""
    channels = {}
    for label in model.dc_labels:
        if label[0] in 'tb' and label[1:].isdigit():
            channels.setdefault(f's{label[1:]}', []).append(label)
        else:
            channels[label] = [label]
    return {name: sorted(members) for name, members in channels.items()}
