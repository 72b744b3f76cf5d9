import { describe, expect, it } from 'vitest';

import { packageNameFromPath } from '../src/content';

describe('packageNameFromPath', () => {
  it('extracts plain names', () => {
    expect(packageNameFromPath('/package/left-pad')).toBe('left-pad');
  });

  it('extracts scoped names', () => {
    expect(packageNameFromPath('/package/@types/node')).toBe('@types/node');
  });

  it('ignores trailing route segments', () => {
    expect(packageNameFromPath('/package/left-pad/v/1.3.0')).toBe('left-pad');
    expect(packageNameFromPath('/package/@types/node/v/20.0.0')).toBe('@types/node');
  });

  it('decodes percent-encoded names', () => {
    expect(packageNameFromPath('/package/%40scope%2FX')).toBe('@scope/X');
  });

  it('returns null off package pages', () => {
    expect(packageNameFromPath('/')).toBeNull();
    expect(packageNameFromPath('/search?q=x')).toBeNull();
    expect(packageNameFromPath('/settings/package')).toBeNull();
  });
});
