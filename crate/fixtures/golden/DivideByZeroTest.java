package com.calculator;

import static androidx.test.espresso.Espresso.closeSoftKeyboard;
import static androidx.test.espresso.Espresso.onView;
import static androidx.test.espresso.action.ViewActions.*;
import static androidx.test.espresso.assertion.ViewAssertions.matches;
import static androidx.test.espresso.matcher.ViewMatchers.*;
import static org.hamcrest.Matchers.*;
import static com.calculator.replay.ReplaySupport.*;

import androidx.test.ext.junit.rules.ActivityScenarioRule;
import androidx.test.ext.junit.runners.AndroidJUnit4;

import org.junit.Rule;
import org.junit.Test;
import org.junit.runner.RunWith;

@RunWith(AndroidJUnit4.class)
public class DivideByZeroTest {
    @Rule
    public ActivityScenarioRule<MainActivity> activityRule =
            new ActivityScenarioRule<>(MainActivity.class);

    @Test
    public void testDivideByZero() {
        onView(withId(R.id.btn5)).perform(click());
        onView(withId(R.id.display))
                .check(matches(withText("5")));
        onView(withId(R.id.divide)).perform(click());
        onView(withId(R.id.display))
                .check(matches(withText("/")));
        onView(withId(R.id.btn0)).perform(click());
        onView(withId(R.id.display))
                .check(matches(withText("0")));
        onView(withId(R.id.equals))
                .check(matches(isClickable()));
        onView(withId(R.id.equals)).perform(click());
        onView(withId(R.id.display))
                .check(matches(withText("ERROR")));
    }
}
