import { CentralityResponse } from '../src/model';

const MONTHS_2019 = [
  '2019-01', '2019-02', '2019-03', '2019-04', '2019-05', '2019-06',
  '2019-07', '2019-08', '2019-09', '2019-10', '2019-11', '2019-12',
];

function series(ranks: number[], months: string[] = MONTHS_2019) {
  return ranks.map((rank, i) => ({
    month: months[i],
    rank_neg: rank,
    score: Math.abs(rank) / 10000,
  }));
}

export const inDeclineResponse: CentralityResponse = {
  package: 'left-pad',
  computed_at: '2019-12',
  window: { from: '2019-01', to: '2019-12', months: 12 },
  series: series([-840, -850, -860, -870, -880, -890, -900, -910, -920, -930, -940, -950]),
  missing_months: [],
  decline: { status: 'in_decline', slope: -10.0, p_value: 0.0, as_of: '2019-12' },
};

export const stableResponse: CentralityResponse = {
  package: '@scope/steady',
  computed_at: '2019-12',
  window: { from: '2019-01', to: '2019-12', months: 12 },
  series: series([-120, -118, -121, -115, -112, -113, -110, -108, -109, -105, -103, -101]),
  missing_months: [],
  decline: { status: 'not_in_decline', slope: 1.8, p_value: 0.00004, as_of: '2019-12' },
};

export const shortHistoryResponse: CentralityResponse = {
  package: 'brand-new',
  computed_at: '2019-12',
  window: { from: '2019-01', to: '2019-12', months: 12 },
  series: series([-40, -38, -39, -37], ['2019-09', '2019-10', '2019-11', '2019-12']),
  missing_months: MONTHS_2019.slice(0, 8),
  decline: { status: 'insufficient_data', slope: null, p_value: null, as_of: '2019-12' },
};
