#include "support/known_knots.hpp"

#include <vector>

namespace testgen {

using thickknot::KnotPolygon;
using thickknot::Point3;

KnotPolygon stick_trefoil() {
    return KnotPolygon::from_trusted(std::vector<Point3>{
        {1.0000000000000002, 0, 0},
        {0.055302381851653371, -0.20134030857921059, 0.25885998224223439},
        {0.89640999320601411, -0.7058579163473766, 0.063924173387105931},
        {-0.013401344783841029, -0.52549985062354398, -0.30985958414362991},
        {0.25395050194464452, -0.055322868862692054, 0.53124480644856076},
        {0.49999999999997391, -0.86602540378442405, 5.1070259132757201e-14},
    });
}

KnotPolygon stick_figure_eight() {
    return KnotPolygon::from_trusted(std::vector<Point3>{
        {1.3065629648763766, 0, 0},
        {1.8974761705687408, -0.58254775895927469, -0.55808573881603074},
        {2.0989721793284666, 0.32135825274876928, -0.18078840188945389},
        {1.3343165045344392, -0.27874761340811172, -0.41568124641502024},
        {1.8385309442700799, -0.24729350713109421, 0.44732422167908403},
        {1.7771466041074471, 0.35071179442438388, -0.35181382778060211},
        {1.8289114104950988, -0.64754176694120091, -0.32334925259342923},
        {0.92387953251128541, -0.92387953251128574, 7.815970093361102e-14},
    });
}

}  // namespace testgen
