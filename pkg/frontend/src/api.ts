/** Client for GET /v1/packages/{name}/centrality.
 *
 * One retry with a short backoff on transient failures (network errors
 * and 5xx); a 404 is a definitive answer and is surfaced immediately.
 */

import { CentralityResponse } from './model';

export class NotFoundError extends Error {}

export interface FetchOptions {
  months?: number;
  retryDelayMs?: number;
  fetchFn?: typeof fetch;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function fetchCentrality(
  baseUrl: string,
  packageName: string,
  options: FetchOptions = {},
): Promise<CentralityResponse> {
  const months = options.months ?? 12;
  const retryDelayMs = options.retryDelayMs ?? 500;
  const fetchFn = options.fetchFn ?? fetch;
  const url =
    `${baseUrl.replace(/\/$/, '')}/v1/packages/` +
    `${encodeURIComponent(packageName)}/centrality?months=${months}`;

  for (let attempt = 0; ; attempt++) {
    try {
      const response = await fetchFn(url);
      if (response.status === 404) {
        throw new NotFoundError(`no data for ${packageName}`);
      }
      if (!response.ok) {
        throw new Error(`service returned ${response.status}`);
      }
      return (await response.json()) as CentralityResponse;
    } catch (error) {
      if (error instanceof NotFoundError || attempt >= 1) {
        throw error;
      }
      await sleep(retryDelayMs);
    }
  }
}
