// Live round trip against a running service; opt in with
//   DECLINEWATCH_URL=http://127.0.0.1:8184 npx vitest run
import { describe, expect, it } from 'vitest';

import { fetchCentrality } from '../src/api';
import { toViewModel } from '../src/model';
import { renderTrendPanel } from '../src/panel';

const baseUrl = process.env.DECLINEWATCH_URL;
const pkg = process.env.DECLINEWATCH_PACKAGE ?? 'doomed';

describe.skipIf(!baseUrl)('against a live service', () => {
  it('fetches and renders a real package', async () => {
    const response = await fetchCentrality(baseUrl!, pkg);
    expect(response.package).toBe(pkg);
    const html = renderTrendPanel(toViewModel(response));
    expect(html).toContain('dw-panel');
    expect(html).toContain('dw-badge');
    expect(html).toContain('<svg');
  });
});
