/** View model for the trend panel, derived 1:1 from the service response. */

export type DeclineStatus = 'in_decline' | 'not_in_decline' | 'insufficient_data';

export interface SeriesPoint {
  month: string;
  rank_neg: number;
  score: number;
}

export interface CentralityResponse {
  package: string;
  computed_at: string;
  window: { from: string; to: string; months: number };
  series: SeriesPoint[];
  missing_months: string[];
  decline: {
    status: DeclineStatus;
    slope: number | null;
    p_value: number | null;
    as_of: string;
  };
}

export type BadgeTone = 'declining' | 'healthy' | 'neutral';

export interface TrendViewModel {
  packageName: string;
  points: { label: string; rankNeg: number }[];
  badge: { text: string; tone: BadgeTone };
  computedAt: string;
}

// fixed 1:1 mapping; the panel never invents a status the API didn't send
const BADGES: Record<DeclineStatus, { text: string; tone: BadgeTone }> = {
  in_decline: { text: 'in decline', tone: 'declining' },
  not_in_decline: { text: 'stable/rising', tone: 'healthy' },
  insufficient_data: { text: 'insufficient data', tone: 'neutral' },
};

export function toViewModel(response: CentralityResponse): TrendViewModel {
  const badge = BADGES[response.decline.status];
  if (badge === undefined) {
    throw new TypeError(`unknown decline status: ${response.decline.status}`);
  }
  return {
    packageName: response.package,
    points: response.series.map((p) => ({ label: p.month, rankNeg: p.rank_neg })),
    badge,
    computedAt: response.computed_at,
  };
}
