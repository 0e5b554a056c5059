#include "kompaneets/ledger.hpp"

namespace kompaneets {

ConservationLedger ledger_update(const ConservationLedger& ledger, const StepRecord& record,
                                 const CellField& after) {
    ConservationLedger next = ledger;
    next.condensate_mass += record.dt * -record.left_outflux;
    next.right_flux_accum += record.dt * record.right_influx;
    double sum = 0.0;
    for (double v : after.values) sum += v;
    next.current_number = after.dx() * sum;
    return next;
}

}  // namespace kompaneets
