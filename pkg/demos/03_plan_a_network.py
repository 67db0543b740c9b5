"""Plan the bundled 20-layer denoiser and render its memory map.

The 640x640, 64-feature stack is where overlapping shines: every interior
layer needs just one padded row of slack between the regions, so the arena
is barely over half the ping-pong footprint.
"""

from actplan import (
    bundled_network_path,
    parse_network_file,
    render_memory_map,
    render_plan_text,
    savings_report,
)

net = parse_network_file(bundled_network_path("dmcnn_vd"))
plan = savings_report(net)
print(render_plan_text(plan))

small = parse_network_file(bundled_network_path("dmcnn_vd_64"))
print("the same stack at 64x64, as a picture of region placement:\n")
print(render_memory_map(savings_report(small), width=72))
print("\ni = this layer's input region, o = its output region, x = overlap")
